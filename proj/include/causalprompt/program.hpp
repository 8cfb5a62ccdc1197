#pragma once

// Program intermediate representation: a task instance mapped onto a small
// program whose functions hold the event texts and whose main() encodes the
// causal structure as control flow. Interventions rewrite this IR before any
// source text is emitted; event texts themselves are never altered.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalprompt/error.hpp"
#include "causalprompt/ir.hpp"
#include "causalprompt/random.hpp"

namespace causalprompt {

enum class Task { Abductive, Counterfactual };
enum class Style { Code, Text };
enum class Format { Plain, Class, Print, Return };
enum class Dialect { Python, Java, C };

inline const char* task_name(Task t) { return t == Task::Abductive ? "abductive" : "counterfactual"; }
inline const char* style_name(Style s) { return s == Style::Code ? "code" : "text"; }
inline const char* format_name(Format f) {
  switch (f) {
    case Format::Plain: return "plain";
    case Format::Class: return "class";
    case Format::Print: return "print";
    case Format::Return: return "return";
  }
  return "unknown";
}
inline const char* dialect_name(Dialect d) {
  switch (d) {
    case Dialect::Python: return "python";
    case Dialect::Java: return "java";
    case Dialect::C: return "c";
  }
  return "unknown";
}

// The four structural interventions. disruption implies
// function_name_perturbation (shuffled positions are only meaningful once
// names no longer reveal roles); sequential_structure and disruption are
// mutually exclusive because one removes the branches the other permutes.
struct InterventionSet {
  bool no_instruction = false;
  bool function_name_perturbation = false;
  bool sequential_structure = false;
  bool disruption = false;

  bool operator==(const InterventionSet&) const = default;

  bool empty() const {
    return !no_instruction && !function_name_perturbation && !sequential_structure && !disruption;
  }

  // Materializes the disruption => rename implication.
  InterventionSet canonical() const {
    InterventionSet c = *this;
    if (c.disruption) c.function_name_perturbation = true;
    return c;
  }

  std::string slug() const {
    InterventionSet c = canonical();
    if (c.empty()) return "none";
    std::string s;
    auto add = [&s](const char* tok) {
      if (!s.empty()) s += '+';
      s += tok;
    };
    if (c.no_instruction) add("noinstruction");
    if (c.function_name_perturbation) add("funcnames");
    if (c.sequential_structure) add("sequential");
    if (c.disruption) add("disruption");
    return s;
  }
};

struct PromptSpec {
  Task task = Task::Abductive;
  Style style = Style::Code;
  Format format = Format::Plain;
  Dialect dialect = Dialect::Python;
  InterventionSet interventions;
  int shots = 0;               // zero-shot by default; k closed demos otherwise
  std::uint64_t seed = 0;      // drives disruption shuffling only

  bool operator==(const PromptSpec&) const = default;

  std::string slug() const {
    std::string s = task_name(task);
    s += "__";
    s += style_name(style);
    if (style == Style::Code) {
      s += "__";
      s += format_name(format);
      s += "__";
      s += dialect_name(dialect);
      s += "__";
      s += interventions.slug();
    }
    return s;
  }
};

inline std::optional<Task> task_from_name(std::string_view s) {
  if (s == "abductive") return Task::Abductive;
  if (s == "counterfactual") return Task::Counterfactual;
  return std::nullopt;
}

inline std::optional<Style> style_from_name(std::string_view s) {
  if (s == "code") return Style::Code;
  if (s == "text") return Style::Text;
  return std::nullopt;
}

inline std::optional<Format> format_from_name(std::string_view s) {
  if (s == "plain") return Format::Plain;
  if (s == "class") return Format::Class;
  if (s == "print") return Format::Print;
  if (s == "return") return Format::Return;
  return std::nullopt;
}

inline std::optional<Dialect> dialect_from_name(std::string_view s) {
  if (s == "python") return Dialect::Python;
  if (s == "java") return Dialect::Java;
  if (s == "c") return Dialect::C;
  return std::nullopt;
}

// Parses "none" or a '+'-joined list of intervention tokens (long CLI
// spellings are accepted alongside the slug tokens).
inline std::optional<InterventionSet> interventions_from_slug(std::string_view s) {
  InterventionSet set;
  if (s == "none" || s.empty()) return set;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t plus = s.find('+', start);
    std::string_view tok = s.substr(start, plus == std::string_view::npos ? s.size() - start
                                                                          : plus - start);
    if (tok == "noinstruction" || tok == "no-instruction") set.no_instruction = true;
    else if (tok == "funcnames" || tok == "function-names") set.function_name_perturbation = true;
    else if (tok == "sequential" || tok == "sequential-structure") set.sequential_structure = true;
    else if (tok == "disruption") set.disruption = true;
    else return std::nullopt;
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return set;
}

inline void validate_spec(const PromptSpec& spec) {
  if (spec.shots < 0) fail(Errc::ConfigError, "shots must be >= 0");
  if (spec.style == Style::Text) {
    if (spec.format != Format::Plain || spec.dialect != Dialect::Python ||
        !spec.interventions.empty())
      fail(Errc::UnsupportedCombination,
           "text style takes no format, dialect or interventions");
    return;
  }
  if (spec.interventions.sequential_structure && spec.interventions.disruption)
    fail(Errc::InterventionConflict,
         "sequential_structure and disruption cannot be combined");
  if (spec.format == Format::Class && spec.dialect != Dialect::Python)
    fail(Errc::UnsupportedCombination, "class format is python-only");
}

inline nlohmann::ordered_json spec_to_json(const PromptSpec& spec) {
  return nlohmann::ordered_json{
      {"task", task_name(spec.task)},
      {"style", style_name(spec.style)},
      {"format", format_name(spec.format)},
      {"dialect", dialect_name(spec.dialect)},
      {"interventions", spec.interventions.slug()},
      {"shots", spec.shots},
      {"seed", spec.seed},
  };
}

inline PromptSpec spec_from_json(const nlohmann::json& j) {
  PromptSpec spec;
  auto parse = [&j](const char* key, auto parser, auto& into) {
    auto v = parser(j.at(key).get<std::string>());
    if (!v) fail(Errc::ParseError, std::string("bad spec field '") + key + "'");
    into = *v;
  };
  try {
    parse("task", task_from_name, spec.task);
    parse("style", style_from_name, spec.style);
    parse("format", format_from_name, spec.format);
    parse("dialect", dialect_from_name, spec.dialect);
    parse("interventions", interventions_from_slug, spec.interventions);
    spec.shots = j.at("shots").get<int>();
    spec.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("bad prompt spec: ") + e.what());
  }
  return spec;
}

// ---- program IR ------------------------------------------------------------

struct ProgramFunction {
  std::string id;            // stable role id ("premise", "hypothesis", ...)
  std::string display_name;  // name used in emitted source; renames touch only this
  std::string text;          // event text; empty for the open target
  bool open = false;         // true for the single function left for completion

  bool operator==(const ProgramFunction&) const = default;
};

// One arm of a conditional: "if condition(): body()".
struct BranchArm {
  std::string condition;  // function id
  std::string body;       // function id

  bool operator==(const BranchArm&) const = default;
};

struct Statement {
  enum class Kind { Call, Branch };
  Kind kind = Kind::Call;
  std::string callee;          // Kind::Call
  std::vector<BranchArm> arms; // Kind::Branch: if / elif chain

  bool operator==(const Statement&) const = default;

  static Statement call(std::string id) {
    Statement s;
    s.kind = Kind::Call;
    s.callee = std::move(id);
    return s;
  }
  static Statement branch(std::vector<BranchArm> arms) {
    Statement s;
    s.kind = Kind::Branch;
    s.arms = std::move(arms);
    return s;
  }
};

struct ProgramIR {
  Task task = Task::Abductive;
  std::optional<std::string> instruction;  // task comment; dropped by no_instruction
  std::vector<Statement> structure;        // body of main()
  std::vector<ProgramFunction> functions;  // definition order: closed first, open last

  const ProgramFunction* find(const std::string& id) const {
    for (const auto& f : functions)
      if (f.id == id) return &f;
    return nullptr;
  }

  const ProgramFunction& open_function() const {
    for (const auto& f : functions)
      if (f.open) return f;
    fail(Errc::ConfigError, "program has no open function");
  }

  // ids referenced by the structure, in reading order (conditions before
  // bodies inside each arm). Used by interventions and by tests.
  std::vector<std::string> structure_ids() const {
    std::vector<std::string> ids;
    for (const auto& st : structure) {
      if (st.kind == Statement::Kind::Call) {
        ids.push_back(st.callee);
      } else {
        for (const auto& arm : st.arms) {
          ids.push_back(arm.condition);
          ids.push_back(arm.body);
        }
      }
    }
    return ids;
  }
};

// Condition slots (branch guards) get boolean-like signatures in typed
// dialects. This is a property of the slot, not of the event role, so a
// disrupted program keeps valid types.
inline bool is_condition_slot_id(const ProgramIR& ir, const std::string& id) {
  for (const auto& st : ir.structure)
    if (st.kind == Statement::Kind::Branch)
      for (const auto& arm : st.arms)
        if (arm.condition == id) return true;
  return false;
}

inline std::string default_instruction(Task task) {
  if (task == Task::Abductive)
    return "Given the premise and the ending of a story, write a plausible hypothesis that "
           "connects them.";
  return "Given a story and a counterfactual context, rewrite the ending of the story with "
         "minimal edits so that it fits the counterfactual context.";
}

// main() { premise(); if (hypothesis()) ending(); } with hypothesis open.
inline ProgramIR build_program(const AbductiveInstance& inst,
                               std::optional<std::string> instruction = std::nullopt) {
  validate_instance(inst);
  ProgramIR ir;
  ir.task = Task::Abductive;
  ir.instruction = instruction ? std::move(instruction) : default_instruction(Task::Abductive);
  ir.structure = {Statement::call("premise"),
                  Statement::branch({BranchArm{"hypothesis", "ending"}})};
  ir.functions = {
      {"premise", "premise", inst.premise.text, false},
      {"ending", "ending", inst.ending.text, false},
      {"hypothesis", "hypothesis", "", true},
  };
  return ir;
}

// main() { premise(); if (hypothesis()) ending(); elif (cf_hypothesis())
// cf_ending(); } with the counterfactual ending open.
inline ProgramIR build_program(const CounterfactualInstance& inst,
                               std::optional<std::string> instruction = std::nullopt) {
  validate_instance(inst);
  ProgramIR ir;
  ir.task = Task::Counterfactual;
  ir.instruction =
      instruction ? std::move(instruction) : default_instruction(Task::Counterfactual);
  ir.structure = {Statement::call("premise"),
                  Statement::branch({BranchArm{"hypothesis", "ending"},
                                     BranchArm{"counterfactual_hypothesis",
                                               "counterfactual_ending"}})};
  ir.functions = {
      {"premise", "premise", inst.premise.text, false},
      {"hypothesis", "hypothesis", inst.initial_context.text, false},
      {"ending", "ending", inst.original_ending.text, false},
      {"counterfactual_hypothesis", "counterfactual_hypothesis",
       inst.counterfactual_context.text, false},
      {"counterfactual_ending", "counterfactual_ending", "", true},
  };
  return ir;
}

namespace detail {

// functionA, functionB, ... in order of first appearance in the structure.
inline void rename_functions(ProgramIR& ir) {
  auto letter_name = [](std::size_t i) {
    // A..Z, then AA.. if a program ever grows that large.
    std::string suffix;
    std::size_t v = i;
    do {
      suffix.insert(suffix.begin(), static_cast<char>('A' + v % 26));
      v /= 26;
    } while (v > 0);
    return "function" + suffix;
  };
  std::vector<std::string> seen;
  for (const auto& id : ir.structure_ids()) {
    if (std::find(seen.begin(), seen.end(), id) != seen.end()) continue;
    for (auto& f : ir.functions)
      if (f.id == id) f.display_name = letter_name(seen.size());
    seen.push_back(id);
  }
}

// Replace every branch with plain calls, keeping reading order (which for
// these programs is chronological order of the story events).
inline void flatten_structure(ProgramIR& ir) {
  std::vector<Statement> flat;
  for (const auto& st : ir.structure) {
    if (st.kind == Statement::Kind::Call) {
      flat.push_back(st);
    } else {
      for (const auto& arm : st.arms) {
        flat.push_back(Statement::call(arm.condition));
        flat.push_back(Statement::call(arm.body));
      }
    }
  }
  ir.structure = std::move(flat);
}

// Permute which function occupies each branch slot. Plain calls (the premise)
// stay fixed. The permutation is seeded and re-drawn until it moves at least
// one slot, so with two or more slots the result never equals the original.
inline void disrupt_structure(ProgramIR& ir, std::uint64_t seed) {
  std::vector<std::string*> slots;
  for (auto& st : ir.structure)
    if (st.kind == Statement::Kind::Branch)
      for (auto& arm : st.arms) {
        slots.push_back(&arm.condition);
        slots.push_back(&arm.body);
      }
  if (slots.size() < 2) return;
  std::vector<std::string> ids(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) ids[i] = *slots[i];

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> perm;
  bool identity = true;
  do {
    perm = random_permutation(slots.size(), rng);
    identity = true;
    for (std::size_t i = 0; i < perm.size(); ++i)
      if (ids[perm[i]] != ids[i]) identity = false;
  } while (identity);
  for (std::size_t i = 0; i < slots.size(); ++i) *slots[i] = ids[perm[i]];
}

}  // namespace detail

// Applies spec.interventions to a copy of the IR. Rename happens before
// disruption so shuffled positions carry anonymized names.
inline ProgramIR apply_interventions(const ProgramIR& ir, const PromptSpec& spec) {
  validate_spec(spec);
  ProgramIR out = ir;
  InterventionSet iv = spec.interventions.canonical();
  if (iv.no_instruction) out.instruction.reset();
  if (iv.function_name_perturbation) detail::rename_functions(out);
  if (iv.sequential_structure) detail::flatten_structure(out);
  if (iv.disruption) detail::disrupt_structure(out, spec.seed);
  return out;
}

}  // namespace causalprompt
