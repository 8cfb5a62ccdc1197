#pragma once

// Statistical analysis over score reports: one-sided paired bootstrap
// significance, pairwise human-judgment win rates, inter-annotator agreement
// (Cohen's kappa), and a comparison-table builder.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalprompt/error.hpp"
#include "causalprompt/metrics.hpp"
#include "causalprompt/random.hpp"

namespace causalprompt {

// One-sided paired bootstrap test of "a beats b": resamples instance indices
// with replacement and reports the fraction of resamples on which
// mean(a) <= mean(b), i.e. how often a's observed advantage fails to show up.
// Identical vectors give p = 1.0 (every resample ties); a vector strictly
// ahead on every instance gives p = 0.0. Deterministic for a fixed seed on
// every platform (hand-rolled resampling on top of mt19937_64).
inline double paired_bootstrap(const std::vector<double>& a, const std::vector<double>& b,
                               int iterations = 10000, std::uint64_t seed = 12345) {
  if (a.size() != b.size())
    fail(Errc::LengthMismatch, "paired bootstrap needs aligned score vectors");
  if (a.empty()) fail(Errc::EmptyCorpus, "paired bootstrap needs at least one instance");
  if (iterations < 1) fail(Errc::ConfigError, "iterations must be >= 1");
  std::mt19937_64 rng(seed);
  const std::size_t n = a.size();
  long not_ahead = 0;
  for (int it = 0; it < iterations; ++it) {
    double sum_a = 0.0;
    double sum_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(rng, n));
      sum_a += a[j];
      sum_b += b[j];
    }
    if (sum_a <= sum_b) ++not_ahead;
  }
  return static_cast<double>(not_ahead) / static_cast<double>(iterations);
}

// ---- pairwise human judgments ---------------------------------------------------

enum class Aspect {
  CoherencePremise,   // abductive
  CoherenceEnding,    // abductive
  OverallCoherence,   // abductive
  Coherence,          // counterfactual
  Preservation,       // counterfactual
};

enum class Verdict { A, Neutral, B };

inline const char* aspect_name(Aspect a) {
  switch (a) {
    case Aspect::CoherencePremise: return "coherence_premise";
    case Aspect::CoherenceEnding: return "coherence_ending";
    case Aspect::OverallCoherence: return "overall_coherence";
    case Aspect::Coherence: return "coherence";
    case Aspect::Preservation: return "preservation";
  }
  return "unknown";
}

inline std::optional<Aspect> aspect_from_name(std::string_view s) {
  if (s == "coherence_premise") return Aspect::CoherencePremise;
  if (s == "coherence_ending") return Aspect::CoherenceEnding;
  if (s == "overall_coherence") return Aspect::OverallCoherence;
  if (s == "coherence") return Aspect::Coherence;
  if (s == "preservation") return Aspect::Preservation;
  return std::nullopt;
}

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::A: return "a";
    case Verdict::Neutral: return "neutral";
    case Verdict::B: return "b";
  }
  return "unknown";
}

inline std::optional<Verdict> verdict_from_name(std::string_view s) {
  if (s == "a") return Verdict::A;
  if (s == "neutral") return Verdict::Neutral;
  if (s == "b") return Verdict::B;
  return std::nullopt;
}

struct PairwiseAnnotation {
  std::string instance_id;
  std::string annotator_id;
  Aspect aspect = Aspect::OverallCoherence;
  Verdict verdict = Verdict::Neutral;
};

struct WinRate {
  double pct_a = 0.0;
  double pct_neutral = 0.0;
  double pct_b = 0.0;
  std::size_t count = 0;
};

// Percentage of annotations (for one aspect) preferring each side.
inline WinRate winrate(const std::vector<PairwiseAnnotation>& annotations, Aspect aspect) {
  WinRate w;
  std::size_t a = 0;
  std::size_t neutral = 0;
  std::size_t b = 0;
  for (const auto& ann : annotations) {
    if (ann.aspect != aspect) continue;
    ++w.count;
    if (ann.verdict == Verdict::A) ++a;
    else if (ann.verdict == Verdict::Neutral) ++neutral;
    else ++b;
  }
  if (w.count == 0)
    fail(Errc::NoAnnotations, std::string("no annotations for aspect ") + aspect_name(aspect));
  w.pct_a = 100.0 * static_cast<double>(a) / static_cast<double>(w.count);
  w.pct_neutral = 100.0 * static_cast<double>(neutral) / static_cast<double>(w.count);
  w.pct_b = 100.0 * static_cast<double>(b) / static_cast<double>(w.count);
  return w;
}

// Cohen's kappa between two annotators over the instances both labeled for
// the given aspect: (p_o - p_e) / (1 - p_e) over the three-way verdicts.
// Two annotators who always agree on one category have p_e = 1; that edge
// case is full agreement and returns 1.
inline double cohen_kappa(const std::vector<PairwiseAnnotation>& annotations,
                          const std::string& annotator_a, const std::string& annotator_b,
                          Aspect aspect) {
  std::map<std::string, Verdict> by_a;
  std::map<std::string, Verdict> by_b;
  for (const auto& ann : annotations) {
    if (ann.aspect != aspect) continue;
    if (ann.annotator_id == annotator_a) by_a[ann.instance_id] = ann.verdict;
    if (ann.annotator_id == annotator_b) by_b[ann.instance_id] = ann.verdict;
  }
  if (by_a.empty() || by_b.empty())
    fail(Errc::NoAnnotations, "annotator has no annotations for aspect");
  double n = 0.0;
  double agree = 0.0;
  double marg_a[3] = {0, 0, 0};
  double marg_b[3] = {0, 0, 0};
  for (const auto& [id, va] : by_a) {
    auto it = by_b.find(id);
    if (it == by_b.end()) continue;
    n += 1.0;
    if (va == it->second) agree += 1.0;
    marg_a[static_cast<int>(va)] += 1.0;
    marg_b[static_cast<int>(it->second)] += 1.0;
  }
  if (n == 0.0) fail(Errc::NoOverlap, "annotators share no instances for aspect");
  double p_o = agree / n;
  double p_e = 0.0;
  for (int k = 0; k < 3; ++k) p_e += (marg_a[k] / n) * (marg_b[k] / n);
  if (p_e == 1.0) return 1.0;
  return (p_o - p_e) / (1.0 - p_e);
}

// ---- annotation file IO ----------------------------------------------------------

inline std::vector<PairwiseAnnotation> annotations_from_jsonl(const std::string& content,
                                                              const std::string& source_name) {
  std::vector<PairwiseAnnotation> out;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(content)) {
    ++line_no;
    if (trim_view(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(Errc::ParseError, source_name + " line " + std::to_string(line_no) + ": " + e.what());
    }
    PairwiseAnnotation ann;
    try {
      ann.instance_id = j.at("instance_id").get<std::string>();
      ann.annotator_id = j.at("annotator_id").get<std::string>();
      auto aspect = aspect_from_name(j.at("aspect").get<std::string>());
      auto verdict = verdict_from_name(j.at("verdict").get<std::string>());
      if (!aspect)
        fail(Errc::ParseError, source_name + " line " + std::to_string(line_no) +
                                   ": unknown aspect '" + j.at("aspect").get<std::string>() + "'");
      if (!verdict)
        fail(Errc::ParseError, source_name + " line " + std::to_string(line_no) +
                                   ": unknown verdict '" + j.at("verdict").get<std::string>() + "'");
      ann.aspect = *aspect;
      ann.verdict = *verdict;
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::ParseError, source_name + " line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(std::move(ann));
  }
  return out;
}

// ---- comparison tables ------------------------------------------------------------

struct SystemScores {
  std::string label;
  ScoreReport report;
};

struct Comparison {
  std::string better;   // label of the system claimed better
  std::string baseline; // label it is compared against
  std::string metric;
  double p_value = 1.0;
};

struct ReportTable {
  std::vector<std::string> metric_names;                  // column order
  std::vector<std::string> row_labels;                    // row order
  std::vector<std::vector<std::optional<double>>> cells;  // rows x metrics
  std::vector<std::vector<bool>> significant;             // cell beat someone at alpha
  double alpha = 0.01;
};

namespace detail {

// Row ordering for intervention sweeps: baseline first, then information,
// structure, format and language variants, text last; unknown configs keep
// their input order at the end.
inline int variant_sort_key(const nlohmann::json& config) {
  if (!config.is_object() || !config.contains("spec")) return 99;
  const auto& spec = config.at("spec");
  auto field = [&spec](const char* k) { return spec.value(k, std::string()); };
  if (field("style") == "text") return 90;
  std::string iv = field("interventions");
  std::string format = field("format");
  std::string dialect = field("dialect");
  bool baseline_format = format == "plain";
  bool python = dialect == "python";
  if (python && baseline_format && iv == "none") return 0;
  if (python && baseline_format && iv == "noinstruction") return 10;
  if (python && baseline_format && iv == "funcnames") return 20;
  if (python && baseline_format && iv == "sequential") return 30;
  if (python && baseline_format && iv.find("disruption") != std::string::npos) return 40;
  if (iv != "none") return 45;  // intervention on a non-baseline format
  if (python && format == "class") return 50;
  if (python && format == "print") return 51;
  if (python && format == "return") return 52;
  if (dialect == "java") return 60;
  if (dialect == "c") return 61;
  return 80;
}

}  // namespace detail

// Builds the metric table for a set of scored systems. All reports must have
// been produced by the same tokenizer over the same instances; comparisons
// mark a cell significant when its system beats the named baseline at alpha.
inline ReportTable build_report(const std::vector<SystemScores>& systems,
                                const std::vector<Comparison>& comparisons, double alpha = 0.01) {
  if (systems.empty()) fail(Errc::EmptyCorpus, "no systems to report");
  const ScoreReport& first = systems.front().report;
  for (const auto& s : systems) {
    if (s.report.tokenizer != first.tokenizer)
      fail(Errc::ConfigMismatch, "reports use different tokenizers: '" + s.report.tokenizer +
                                     "' vs '" + first.tokenizer + "'");
    if (s.report.instance_ids != first.instance_ids)
      fail(Errc::InstanceMismatch, "report for '" + s.label + "' covers different instances");
  }

  // Stable variant ordering; unknown layouts keep input order.
  std::vector<std::size_t> order(systems.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&systems](std::size_t x, std::size_t y) {
    return detail::variant_sort_key(systems[x].report.config) <
           detail::variant_sort_key(systems[y].report.config);
  });

  ReportTable table;
  table.alpha = alpha;
  for (const auto& s : systems)
    for (const auto& [name, scores] : s.report.metrics)
      if (std::find(table.metric_names.begin(), table.metric_names.end(), name) ==
          table.metric_names.end())
        table.metric_names.push_back(name);

  for (std::size_t idx : order) {
    const auto& s = systems[idx];
    table.row_labels.push_back(s.label);
    std::vector<std::optional<double>> row;
    std::vector<bool> sig;
    for (const auto& name : table.metric_names) {
      const MetricScores* m = s.report.find(name);
      row.push_back(m ? std::optional<double>(m->corpus) : std::nullopt);
      bool significant = false;
      for (const auto& c : comparisons)
        if (c.better == s.label && c.metric == name && c.p_value < alpha) significant = true;
      sig.push_back(significant);
    }
    table.cells.push_back(std::move(row));
    table.significant.push_back(std::move(sig));
  }
  return table;
}

inline std::string render_text_table(const ReportTable& table) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"system"};
  for (const auto& m : table.metric_names) header.push_back(m);
  grid.push_back(header);
  for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
    std::vector<std::string> row{table.row_labels[r]};
    for (std::size_t c = 0; c < table.metric_names.size(); ++c) {
      const auto& cell = table.cells[r][c];
      if (!cell) {
        row.push_back("-");
        continue;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", *cell);
      row.push_back(std::string(buf) + (table.significant[r][c] ? "*" : ""));
    }
    grid.push_back(row);
  }
  std::vector<std::size_t> widths(grid[0].size(), 0);
  for (const auto& row : grid)
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  std::string out;
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::string cell = row[c];
      cell.resize(widths[c], ' ');
      out += cell;
      if (c + 1 < row.size()) out += "  ";
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  char note[64];
  std::snprintf(note, sizeof note, "* significant at alpha=%g\n", table.alpha);
  return out + note;
}

inline nlohmann::ordered_json report_table_to_json(const ReportTable& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
    nlohmann::ordered_json cells = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < table.metric_names.size(); ++c) {
      if (!table.cells[r][c]) continue;
      cells[table.metric_names[c]] = nlohmann::ordered_json{
          {"score", *table.cells[r][c]}, {"significant", static_cast<bool>(table.significant[r][c])}};
    }
    rows.push_back(nlohmann::ordered_json{{"system", table.row_labels[r]}, {"scores", cells}});
  }
  return nlohmann::ordered_json{
      {"alpha", table.alpha}, {"metrics", table.metric_names}, {"rows", rows}};
}

}  // namespace causalprompt
