#pragma once

// Enumeration of the valid prompt-variant space: every format/dialect pair
// and every satisfiable canonical intervention set. Used for golden-file
// sweeps and intervention studies.

#include <cstdint>
#include <utility>
#include <vector>

#include "causalprompt/program.hpp"

namespace causalprompt {

// The ten distinct canonical intervention sets: all subsets of the four
// axes, minus sequential+disruption conflicts, deduplicated after the
// disruption => rename implication.
inline std::vector<InterventionSet> canonical_intervention_sets() {
  std::vector<InterventionSet> sets;
  for (unsigned bits = 0; bits < 16; ++bits) {
    InterventionSet s;
    s.no_instruction = bits & 1;
    s.function_name_perturbation = bits & 2;
    s.sequential_structure = bits & 4;
    s.disruption = bits & 8;
    if (s.sequential_structure && s.disruption) continue;
    InterventionSet c = s.canonical();
    bool seen = false;
    for (const auto& other : sets)
      if (other == c) seen = true;
    if (!seen) sets.push_back(c);
  }
  return sets;
}

inline std::vector<std::pair<Format, Dialect>> valid_format_dialects() {
  std::vector<std::pair<Format, Dialect>> pairs;
  for (Dialect d : {Dialect::Python, Dialect::Java, Dialect::C})
    for (Format f : {Format::Plain, Format::Class, Format::Print, Format::Return}) {
      if (f == Format::Class && d != Dialect::Python) continue;
      pairs.emplace_back(f, d);
    }
  return pairs;
}

// Every valid code-style spec for a task (10 format/dialect pairs x 10
// intervention sets), plus the text-style baseline at the end.
inline std::vector<PromptSpec> enumerate_specs(Task task, std::uint64_t seed = 0) {
  std::vector<PromptSpec> specs;
  for (const auto& [format, dialect] : valid_format_dialects()) {
    for (const auto& iv : canonical_intervention_sets()) {
      PromptSpec spec;
      spec.task = task;
      spec.style = Style::Code;
      spec.format = format;
      spec.dialect = dialect;
      spec.interventions = iv;
      spec.seed = seed;
      specs.push_back(spec);
    }
  }
  PromptSpec text;
  text.task = task;
  text.style = Style::Text;
  specs.push_back(text);
  return specs;
}

}  // namespace causalprompt
