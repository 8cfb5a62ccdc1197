#pragma once

// Typed story events and task instances. An event is one narrative unit with
// a causal role; instances bundle the events of an abductive or a
// counterfactual reasoning item together with gold reference texts.

#include <string>
#include <string_view>
#include <vector>

#include "causalprompt/error.hpp"
#include "causalprompt/text.hpp"

namespace causalprompt {

enum class Role {
  Premise,
  Hypothesis,
  Ending,
  CounterfactualHypothesis,
  CounterfactualEnding,
};

inline const char* role_name(Role r) {
  switch (r) {
    case Role::Premise: return "premise";
    case Role::Hypothesis: return "hypothesis";
    case Role::Ending: return "ending";
    case Role::CounterfactualHypothesis: return "counterfactual_hypothesis";
    case Role::CounterfactualEnding: return "counterfactual_ending";
  }
  return "unknown";
}

struct Event {
  Role role = Role::Premise;
  std::string text;

  bool operator==(const Event&) const = default;
};

// Whitespace-normalizes raw text and attaches the role. Empty (or
// whitespace-only) text is rejected; normalization also removes newlines, so
// a valid event is always a single non-empty line.
inline Event normalize_event(std::string_view raw_text, Role role) {
  Event e{role, normalize_whitespace(raw_text)};
  if (e.text.empty())
    fail(Errc::EmptyText, std::string("event with role '") + role_name(role) + "' has no text");
  return e;
}

// Abductive item: premise and ending observed, hypothesis to be produced.
struct AbductiveInstance {
  std::string id;
  Event premise;  // Role::Premise
  Event ending;   // Role::Ending
  std::vector<std::string> references;  // gold hypotheses; may be empty
};

// Counterfactual item: a full five-sentence story plus a counterfactual
// context; the rewritten ending is to be produced. original_ending and the
// references usually hold three sentences joined into one line.
struct CounterfactualInstance {
  std::string id;
  Event premise;                 // Role::Premise
  Event initial_context;         // Role::Hypothesis
  Event original_ending;         // Role::Ending
  Event counterfactual_context;  // Role::CounterfactualHypothesis
  std::vector<std::string> references;  // gold rewritten endings; may be empty
};

namespace detail {

inline void check_event(const Event& e, Role expected, std::string_view instance_id) {
  if (e.role != expected)
    fail(Errc::RoleMismatch, "instance '" + std::string(instance_id) + "': slot for '" +
                                 role_name(expected) + "' holds role '" + role_name(e.role) + "'");
  if (e.text.empty())
    fail(Errc::EmptyText,
         "instance '" + std::string(instance_id) + "': empty text for '" + role_name(expected) + "'");
  if (e.text.find('\n') != std::string::npos)
    fail(Errc::EmptyText, "instance '" + std::string(instance_id) + "': '" + role_name(expected) +
                              "' text contains a newline; normalize_event it first");
}

}  // namespace detail

// Both validators return the instance untouched so calls can be chained.
inline const AbductiveInstance& validate_instance(const AbductiveInstance& inst) {
  if (inst.id.empty()) fail(Errc::MissingField, "abductive instance has an empty id");
  detail::check_event(inst.premise, Role::Premise, inst.id);
  detail::check_event(inst.ending, Role::Ending, inst.id);
  return inst;
}

inline const CounterfactualInstance& validate_instance(const CounterfactualInstance& inst) {
  if (inst.id.empty()) fail(Errc::MissingField, "counterfactual instance has an empty id");
  detail::check_event(inst.premise, Role::Premise, inst.id);
  detail::check_event(inst.initial_context, Role::Hypothesis, inst.id);
  detail::check_event(inst.original_ending, Role::Ending, inst.id);
  detail::check_event(inst.counterfactual_context, Role::CounterfactualHypothesis, inst.id);
  return inst;
}

// Variant used for one-sentence-ending studies: keeps only the first sentence
// of the original ending and of every reference. The input is not modified.
inline CounterfactualInstance to_first_sentence(const CounterfactualInstance& inst) {
  CounterfactualInstance out = inst;
  out.original_ending.text = first_sentence(out.original_ending.text);
  for (auto& ref : out.references) ref = first_sentence(normalize_whitespace(ref));
  return out;
}

}  // namespace causalprompt
