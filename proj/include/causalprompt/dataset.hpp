#pragma once

// JSONL ingestion for abductive and counterfactual corpora. A FieldMapping
// names the source fields; two presets cover the common public layouts.
// Reference fields may be a string, an array of strings, or an array of
// sentence arrays (each inner array is joined into one reference).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalprompt/error.hpp"
#include "causalprompt/ir.hpp"

namespace causalprompt {

struct FieldMapping {
  std::string id = "id";
  std::string premise = "premise";
  std::string ending = "ending";                                // abductive only
  std::string initial_context = "initial_context";              // counterfactual only
  std::string original_ending = "original_ending";              // counterfactual only
  std::string counterfactual_context = "counterfactual_context";  // counterfactual only
  std::string references = "references";
  std::string reference_join = " ";  // glue for nested reference sentence lists
};

// Observation-1 / observation-2 layout with plausible hypotheses.
inline FieldMapping art_mapping() {
  FieldMapping m;
  m.id = "story_id";
  m.premise = "obs1";
  m.ending = "obs2";
  m.references = "hyps";
  return m;
}

// Five-sentence rewriting layout with edited endings.
inline FieldMapping timetravel_mapping() {
  FieldMapping m;
  m.id = "story_id";
  m.premise = "premise";
  m.initial_context = "initial";
  m.original_ending = "original_ending";
  m.counterfactual_context = "counterfactual";
  m.references = "edited_endings";
  return m;
}

inline std::optional<FieldMapping> preset_mapping(std::string_view name) {
  if (name == "art") return art_mapping();
  if (name == "timetravel") return timetravel_mapping();
  return std::nullopt;
}

inline FieldMapping mapping_from_json(const nlohmann::json& j) {
  FieldMapping m;
  auto take = [&j](const char* key, std::string& into) {
    if (j.contains(key)) {
      if (!j.at(key).is_string()) fail(Errc::MappingError, std::string("mapping field '") + key + "' must be a string");
      into = j.at(key).get<std::string>();
    }
  };
  take("id", m.id);
  take("premise", m.premise);
  take("ending", m.ending);
  take("initial_context", m.initial_context);
  take("original_ending", m.original_ending);
  take("counterfactual_context", m.counterfactual_context);
  take("references", m.references);
  take("reference_join", m.reference_join);
  return m;
}

struct LoadOptions {
  bool permissive = false;  // skip records that fail mapping/validation, log to stderr
};

namespace detail {

inline std::string require_string(const nlohmann::json& j, const std::string& field,
                                  std::size_t line_no) {
  if (!j.contains(field))
    fail(Errc::MappingError, "line " + std::to_string(line_no) + ": missing field '" + field + "'");
  const auto& v = j.at(field);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());  // ids are often numeric
  fail(Errc::MappingError,
       "line " + std::to_string(line_no) + ": field '" + field + "' is not a string");
}

inline std::vector<std::string> read_references(const nlohmann::json& j, const FieldMapping& m,
                                                std::size_t line_no) {
  std::vector<std::string> refs;
  if (!j.contains(m.references) || j.at(m.references).is_null()) return refs;
  const auto& v = j.at(m.references);
  if (v.is_string()) {
    refs.push_back(v.get<std::string>());
    return refs;
  }
  if (!v.is_array())
    fail(Errc::MappingError, "line " + std::to_string(line_no) + ": field '" + m.references +
                                 "' is neither string nor array");
  for (const auto& item : v) {
    if (item.is_string()) {
      refs.push_back(item.get<std::string>());
    } else if (item.is_array()) {
      std::string joined;
      for (const auto& sentence : item) {
        if (!sentence.is_string())
          fail(Errc::MappingError,
               "line " + std::to_string(line_no) + ": nested reference entry is not a string");
        if (!joined.empty()) joined += m.reference_join;
        joined += sentence.get<std::string>();
      }
      refs.push_back(std::move(joined));
    } else {
      fail(Errc::MappingError,
           "line " + std::to_string(line_no) + ": reference entry is not a string");
    }
  }
  return refs;
}

template <typename Instance, typename MakeFn>
std::vector<Instance> load_jsonl(const std::filesystem::path& path, const LoadOptions& opts,
                                 MakeFn make) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open dataset file: " + path.string());
  std::vector<Instance> out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t skipped = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_view(line).empty()) continue;
    try {
      nlohmann::json j = nlohmann::json::parse(line, nullptr, true);
      out.push_back(make(j, line_no));
    } catch (const nlohmann::json::parse_error& e) {
      if (!opts.permissive)
        fail(Errc::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
      ++skipped;
      std::cerr << "warning: skipping line " << line_no << ": " << e.what() << "\n";
    } catch (const Error& e) {
      if (!opts.permissive) throw;
      ++skipped;
      std::cerr << "warning: skipping line " << line_no << ": " << e.what() << "\n";
    }
  }
  if (skipped > 0)
    std::cerr << "warning: skipped " << skipped << " of " << line_no << " records in "
              << path.string() << "\n";
  return out;
}

}  // namespace detail

inline std::vector<AbductiveInstance> load_abductive(const std::filesystem::path& path,
                                                     const FieldMapping& mapping = art_mapping(),
                                                     const LoadOptions& opts = {}) {
  return detail::load_jsonl<AbductiveInstance>(
      path, opts, [&mapping](const nlohmann::json& j, std::size_t line_no) {
        AbductiveInstance inst;
        inst.id = detail::require_string(j, mapping.id, line_no);
        inst.premise = normalize_event(detail::require_string(j, mapping.premise, line_no),
                                       Role::Premise);
        inst.ending =
            normalize_event(detail::require_string(j, mapping.ending, line_no), Role::Ending);
        for (auto& r : detail::read_references(j, mapping, line_no))
          inst.references.push_back(normalize_whitespace(r));
        return validate_instance(inst);
      });
}

inline std::vector<CounterfactualInstance> load_counterfactual(
    const std::filesystem::path& path, const FieldMapping& mapping = timetravel_mapping(),
    const LoadOptions& opts = {}) {
  return detail::load_jsonl<CounterfactualInstance>(
      path, opts, [&mapping](const nlohmann::json& j, std::size_t line_no) {
        CounterfactualInstance inst;
        inst.id = detail::require_string(j, mapping.id, line_no);
        inst.premise = normalize_event(detail::require_string(j, mapping.premise, line_no),
                                       Role::Premise);
        inst.initial_context = normalize_event(
            detail::require_string(j, mapping.initial_context, line_no), Role::Hypothesis);
        inst.original_ending = normalize_event(
            detail::require_string(j, mapping.original_ending, line_no), Role::Ending);
        inst.counterfactual_context =
            normalize_event(detail::require_string(j, mapping.counterfactual_context, line_no),
                            Role::CounterfactualHypothesis);
        for (auto& r : detail::read_references(j, mapping, line_no))
          inst.references.push_back(normalize_whitespace(r));
        return validate_instance(inst);
      });
}

}  // namespace causalprompt
