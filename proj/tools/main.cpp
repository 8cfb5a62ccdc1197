// Command-line front end: each subcommand wraps one pipeline stage so runs
// can be rendered, executed, re-scored, compared and reported incrementally.
// Exit codes: 0 success, 1 usage/configuration, 2 provider failure, 3 data.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causalprompt/causalprompt.hpp"

namespace cp = causalprompt;
namespace fs = std::filesystem;

namespace {

// ---- option bundles --------------------------------------------------------------

struct DataOptions {
  std::string task = "abductive";
  std::string style = "code";
  std::string format = "plain";
  std::string dialect = "python";
  std::string interventions = "none";
  int shots = 0;
  std::uint64_t seed = 0;
  std::string dataset;
  std::string mapping;  // empty: preset chosen by task
  std::string mapping_file;
  std::string instruction;
  bool first_sentence = false;
  std::string demo_dataset;
  long long subset = -1;  // -1: whole dataset
  std::uint64_t sample_seed = 0;
  bool permissive = false;
  std::string label;
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("--task", o.task, "abductive or counterfactual")->capture_default_str();
  cmd->add_option("--dataset", o.dataset, "JSONL dataset file")->required();
  cmd->add_option("--mapping", o.mapping,
                  "field mapping preset: art or timetravel (default: chosen by task)");
  cmd->add_option("--mapping-file", o.mapping_file, "JSON file with a custom field mapping");
  cmd->add_option("--style", o.style, "prompt style: code or text")->capture_default_str();
  cmd->add_option("--format", o.format, "code format: plain, class, print or return")
      ->capture_default_str();
  cmd->add_option("--dialect", o.dialect, "code dialect: python, java or c")
      ->capture_default_str();
  cmd->add_option("--interventions", o.interventions,
                  "'+'-joined interventions: no-instruction, function-names, "
                  "sequential-structure, disruption; or none")
      ->capture_default_str();
  cmd->add_option("--shots", o.shots, "few-shot demo count")->capture_default_str();
  cmd->add_option("--demo-dataset", o.demo_dataset, "dataset supplying the few-shot demos");
  cmd->add_option("--instruction", o.instruction, "override the built-in task instruction");
  cmd->add_flag("--first-sentence", o.first_sentence,
                "counterfactual: keep only the first sentence of endings and references");
  cmd->add_option("--seed", o.seed, "seed for the disruption permutation")
      ->capture_default_str();
  cmd->add_option("--subset", o.subset, "evaluate a seeded sample of this many instances");
  cmd->add_option("--sample-seed", o.sample_seed, "seed for subset sampling")
      ->capture_default_str();
  cmd->add_flag("--permissive", o.permissive, "skip dataset records that fail to load");
  cmd->add_option("--label", o.label, "system label used in reports (default: spec slug)");
}

struct ProviderOptions {
  std::string provider = "replay";
  std::string model = "fixture-model";
  std::string replay_file;
  std::string endpoint;
  std::string provider_id = "live";
  std::string endpoint_env = "CAUSALPROMPT_ENDPOINT";
  std::string api_key_env = "CAUSALPROMPT_API_KEY";
  int max_attempts = 5;
  int base_delay_ms = 1000;
  double temperature = 0.0;
  double top_p = 1.0;
  int max_tokens = -1;  // -1: 64 for abductive, 128 for counterfactual
  std::vector<std::string> stop;
  int concurrency = 4;
  std::string embedder = "stub";
  std::vector<std::string> metrics;
};

void add_provider_options(CLI::App* cmd, ProviderOptions& o) {
  cmd->add_option("--provider", o.provider, "completion provider: replay or http")
      ->capture_default_str();
  cmd->add_option("--model", o.model, "model identifier sent to the provider")
      ->capture_default_str();
  cmd->add_option("--replay", o.replay_file, "record file backing the replay provider");
  cmd->add_option("--endpoint", o.endpoint, "http provider endpoint URL");
  cmd->add_option("--provider-id", o.provider_id, "provider id recorded with http completions")
      ->capture_default_str();
  cmd->add_option("--endpoint-env", o.endpoint_env,
                  "environment variable consulted when --endpoint is absent")
      ->capture_default_str();
  cmd->add_option("--api-key-env", o.api_key_env,
                  "environment variable holding the http credential")
      ->capture_default_str();
  cmd->add_option("--max-attempts", o.max_attempts, "retry budget per request")
      ->capture_default_str();
  cmd->add_option("--retry-base-ms", o.base_delay_ms, "initial retry backoff in milliseconds")
      ->capture_default_str();
  cmd->add_option("--temperature", o.temperature, "sampling temperature")->capture_default_str();
  cmd->add_option("--top-p", o.top_p, "nucleus sampling mass")->capture_default_str();
  cmd->add_option("--max-tokens", o.max_tokens,
                  "completion token budget (default: 64 abductive, 128 counterfactual)");
  cmd->add_option("--stop", o.stop, "stop sequence (repeatable; default: from the prompt)");
  cmd->add_option("--concurrency", o.concurrency, "parallel requests during the run stage")
      ->capture_default_str();
  cmd->add_option("--embedder", o.embedder, "embedding backend for bertscore: stub or none")
      ->capture_default_str();
  cmd->add_option("--metric", o.metrics, "metric to compute (repeatable; default: by task)");
}

template <typename T>
T parse_enum(const std::string& value, std::optional<T> (*parser)(std::string_view),
             const char* what) {
  auto parsed = parser(value);
  if (!parsed) cp::fail(cp::Errc::ConfigError, std::string("unknown ") + what + ": " + value);
  return *parsed;
}

cp::PromptSpec build_spec(const DataOptions& o) {
  cp::PromptSpec spec;
  spec.task = parse_enum(o.task, cp::task_from_name, "task");
  spec.style = parse_enum(o.style, cp::style_from_name, "style");
  spec.format = parse_enum(o.format, cp::format_from_name, "format");
  spec.dialect = parse_enum(o.dialect, cp::dialect_from_name, "dialect");
  auto interventions = cp::interventions_from_slug(o.interventions);
  if (!interventions)
    cp::fail(cp::Errc::ConfigError, "unknown intervention list: " + o.interventions);
  spec.interventions = *interventions;
  spec.shots = o.shots;
  spec.seed = o.seed;
  cp::validate_spec(spec);
  return spec;
}

cp::RunConfig build_run_config(const DataOptions& d, const ProviderOptions& p,
                               const std::string& out_dir) {
  cp::RunConfig config;
  config.spec = build_spec(d);
  config.label = d.label;
  config.dataset = d.dataset;
  config.mapping_preset =
      !d.mapping.empty() ? d.mapping
                         : (config.spec.task == cp::Task::Abductive ? "art" : "timetravel");
  if (!d.mapping_file.empty()) config.mapping_file = d.mapping_file;
  if (!d.instruction.empty()) config.instruction = d.instruction;
  config.first_sentence = d.first_sentence;
  if (!d.demo_dataset.empty()) config.demo_dataset = d.demo_dataset;
  if (d.subset >= 0) config.subset = static_cast<std::size_t>(d.subset);
  config.sample_seed = d.sample_seed;
  config.permissive_load = d.permissive;
  config.out_dir = out_dir;

  config.provider.kind = p.provider;
  config.provider.model = p.model;
  config.provider.replay_file = p.replay_file;
  config.provider.endpoint = p.endpoint;
  config.provider.provider_id = p.provider_id;
  config.provider.endpoint_env = p.endpoint_env;
  config.provider.api_key_env = p.api_key_env;
  config.provider.retry.max_attempts = p.max_attempts;
  config.provider.retry.base_delay_ms = p.base_delay_ms;
  config.params.temperature = p.temperature;
  config.params.top_p = p.top_p;
  config.params.max_tokens =
      p.max_tokens > 0 ? p.max_tokens
                       : (config.spec.task == cp::Task::Counterfactual ? 128 : 64);
  config.params.stop = p.stop;
  config.concurrency = p.concurrency;
  config.embedder = p.embedder;
  config.metrics = p.metrics;
  return config;
}

// ---- run directory readers ---------------------------------------------------------

nlohmann::ordered_json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) cp::fail(cp::Errc::ConfigError, "cannot open " + path.string());
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    cp::fail(cp::Errc::ParseError, path.string() + ": " + e.what());
  }
  return j;
}

cp::ScoreReport load_score_report(const fs::path& run_dir) {
  fs::path path = run_dir / "score_report.json";
  if (!fs::exists(path))
    cp::fail(cp::Errc::ConfigError,
             "no score_report.json in " + run_dir.string() + "; run 'score' first");
  return cp::report_from_json(read_json_file(path));
}

std::string report_label(const cp::ScoreReport& report, const fs::path& run_dir) {
  if (report.config.is_object() && report.config.contains("label"))
    return report.config.at("label").get<std::string>();
  return run_dir.filename().string();
}

// ---- subcommand actions --------------------------------------------------------------

void do_render(const DataOptions& d, const std::string& out_dir, long long index) {
  cp::RunConfig config = build_run_config(d, ProviderOptions{}, out_dir);
  cp::PreparedInstances prepared = cp::prepare_instances(config);
  std::vector<cp::RenderedPrompt> prompts = cp::render_all(config, prepared);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream manifest(fs::path(out_dir) / "manifest.json", std::ios::trunc);
    if (!manifest) cp::fail(cp::Errc::ConfigError, "cannot write manifest in " + out_dir);
    manifest << cp::build_manifest(config).dump(2) << "\n";
    cp::write_prompts_file(fs::path(out_dir) / "prompts.jsonl", prepared, prompts);
    std::cout << "wrote " << prompts.size() << " prompts to " << out_dir << "\n";
    return;
  }
  if (index < 0 || static_cast<std::size_t>(index) >= prompts.size())
    cp::fail(cp::Errc::ConfigError,
             "--index " + std::to_string(index) + " out of range for " +
                 std::to_string(prompts.size()) + " prompts");
  std::cout << prompts[static_cast<std::size_t>(index)].text << "\n";
}

void do_run(const DataOptions& d, const ProviderOptions& p, const std::string& out_dir) {
  cp::RunConfig config = build_run_config(d, p, out_dir);
  fs::path out = cp::run_pipeline(config);
  cp::ScoreReport report = cp::report_from_json(read_json_file(out / "score_report.json"));
  std::cout << "run complete: " << out.string() << "\n";
  for (const auto& [name, scores] : report.metrics) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "  %-20s %.1f", name.c_str(), scores.corpus);
    std::cout << buf << "\n";
  }
}

void do_score(const std::string& run_dir, std::vector<std::string> metrics,
              std::string embedder_kind) {
  fs::path dir(run_dir);
  nlohmann::ordered_json manifest = read_json_file(dir / "manifest.json");
  std::string task = manifest.at("spec").at("task").get<std::string>();
  bool counterfactual = task == "counterfactual";

  std::vector<std::string> ids;
  std::vector<std::vector<std::string>> references;
  std::vector<std::string> originals;
  {
    std::ifstream in(dir / "prompts.jsonl");
    if (!in) cp::fail(cp::Errc::ConfigError, "missing prompts.jsonl in " + run_dir);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (cp::trim_view(line).empty()) continue;
      try {
        nlohmann::json row = nlohmann::json::parse(line);
        ids.push_back(row.at("instance_id").get<std::string>());
        references.push_back(row.at("references").get<std::vector<std::string>>());
        if (counterfactual)
          originals.push_back(row.at("inputs").at("original_ending").get<std::string>());
      } catch (const nlohmann::json::exception& e) {
        cp::fail(cp::Errc::ParseError,
                 "prompts.jsonl line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  std::vector<std::string> texts;
  {
    std::ifstream in(dir / "generations.jsonl");
    if (!in) cp::fail(cp::Errc::ConfigError, "missing generations.jsonl in " + run_dir);
    std::string line;
    std::size_t i = 0;
    while (std::getline(in, line)) {
      if (cp::trim_view(line).empty()) continue;
      nlohmann::json row = nlohmann::json::parse(line);
      if (i >= ids.size() || row.at("instance_id").get<std::string>() != ids[i])
        cp::fail(cp::Errc::InstanceMismatch,
                 "generations.jsonl does not align with prompts.jsonl in " + run_dir);
      texts.push_back(row.at("text").get<std::string>());
      ++i;
    }
  }
  if (texts.size() != ids.size())
    cp::fail(cp::Errc::InstanceMismatch, "generations missing for some prompts in " + run_dir);

  if (metrics.empty()) metrics = manifest.at("metrics").get<std::vector<std::string>>();
  if (embedder_kind.empty()) embedder_kind = manifest.value("embedder", "stub");
  std::unique_ptr<cp::TokenEmbedder> embedder;
  if (embedder_kind == "stub") embedder = std::make_unique<cp::HashedStubEmbedder>();
  else if (embedder_kind != "none")
    cp::fail(cp::Errc::ConfigError, "unknown embedder: " + embedder_kind);

  cp::ScoreReport report =
      cp::compute_scores(task, ids, texts, references, originals, metrics, embedder.get());
  report.config = nlohmann::ordered_json{
      {"label", manifest.at("label")},
      {"spec", manifest.at("spec")},
      {"params", manifest.at("params")},
      {"provider",
       {{"kind", manifest.at("provider").at("kind")},
        {"model", manifest.at("provider").at("model")}}},
      {"embedder", embedder ? embedder->id() : "none"},
  };
  std::ofstream out(dir / "score_report.json", std::ios::trunc);
  if (!out) cp::fail(cp::Errc::ConfigError, "cannot write score report in " + run_dir);
  out << cp::report_to_json(report).dump(2) << "\n";
  for (const auto& [name, scores] : report.metrics) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-20s %.1f", name.c_str(), scores.corpus);
    std::cout << buf << "\n";
  }
}

void do_compare(const std::string& run_a, const std::string& run_b,
                std::vector<std::string> metrics, int iterations, std::uint64_t seed,
                const std::string& out_file) {
  cp::ScoreReport a = load_score_report(run_a);
  cp::ScoreReport b = load_score_report(run_b);
  if (a.tokenizer != b.tokenizer)
    cp::fail(cp::Errc::ConfigMismatch, "runs were scored with different tokenizers");
  if (a.instance_ids != b.instance_ids)
    cp::fail(cp::Errc::InstanceMismatch, "runs cover different instances");
  if (metrics.empty())
    for (const auto& [name, scores] : a.metrics)
      if (b.find(name)) metrics.push_back(name);
  if (metrics.empty()) cp::fail(cp::Errc::ConfigError, "runs share no metrics to compare");

  std::string label_a = report_label(a, run_a);
  std::string label_b = report_label(b, run_b);
  std::cout << "a: " << label_a << "\nb: " << label_b << "\n";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& name : metrics) {
    const cp::MetricScores* ma = a.find(name);
    const cp::MetricScores* mb = b.find(name);
    if (!ma || !mb) cp::fail(cp::Errc::ConfigError, "metric not present in both runs: " + name);
    double p = cp::paired_bootstrap(ma->per_instance, mb->per_instance, iterations, seed);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-20s a=%.1f b=%.1f p(a>b)=%.4f", name.c_str(), ma->corpus,
                  mb->corpus, p);
    std::cout << buf << "\n";
    rows.push_back(nlohmann::ordered_json{{"metric", name},
                                          {"corpus_a", ma->corpus},
                                          {"corpus_b", mb->corpus},
                                          {"p_value_a_beats_b", p}});
  }
  if (!out_file.empty()) {
    std::ofstream out(out_file, std::ios::trunc);
    if (!out) cp::fail(cp::Errc::ConfigError, "cannot write " + out_file);
    out << nlohmann::ordered_json{{"system_a", label_a},
                                  {"system_b", label_b},
                                  {"iterations", iterations},
                                  {"seed", seed},
                                  {"comparisons", rows}}
               .dump(2)
        << "\n";
  }
}

void do_report(const std::vector<std::string>& run_dirs, const std::string& baseline,
               double alpha, int iterations, std::uint64_t seed, const std::string& out_file) {
  std::vector<cp::SystemScores> systems;
  for (const auto& dir : run_dirs) {
    cp::ScoreReport report = load_score_report(dir);
    systems.push_back({report_label(report, dir), std::move(report)});
  }
  std::vector<cp::Comparison> comparisons;
  if (!baseline.empty()) {
    const cp::SystemScores* base = nullptr;
    for (const auto& s : systems)
      if (s.label == baseline) base = &s;
    if (!base) cp::fail(cp::Errc::ConfigError, "baseline label not found: " + baseline);
    for (const auto& s : systems) {
      if (s.label == baseline) continue;
      for (const auto& [name, scores] : s.report.metrics) {
        const cp::MetricScores* bm = base->report.find(name);
        if (!bm) continue;
        comparisons.push_back(
            {s.label, baseline, name,
             cp::paired_bootstrap(scores.per_instance, bm->per_instance, iterations, seed)});
        comparisons.push_back(
            {baseline, s.label, name,
             cp::paired_bootstrap(bm->per_instance, scores.per_instance, iterations, seed)});
      }
    }
  }
  cp::ReportTable table = cp::build_report(systems, comparisons, alpha);
  std::cout << cp::render_text_table(table);
  if (!out_file.empty()) {
    nlohmann::ordered_json j = cp::report_table_to_json(table);
    nlohmann::ordered_json comps = nlohmann::ordered_json::array();
    for (const auto& c : comparisons)
      comps.push_back(nlohmann::ordered_json{{"better", c.better},
                                             {"baseline", c.baseline},
                                             {"metric", c.metric},
                                             {"p_value", c.p_value}});
    j["comparisons"] = std::move(comps);
    std::ofstream out(out_file, std::ios::trunc);
    if (!out) cp::fail(cp::Errc::ConfigError, "cannot write " + out_file);
    out << j.dump(2) << "\n";
  }
}

void do_agreement(const std::string& file, const std::string& aspect_name,
                  const std::string& annotator_a, const std::string& annotator_b,
                  const std::string& out_file) {
  std::ifstream in(file);
  if (!in) cp::fail(cp::Errc::ConfigError, "cannot open annotations file: " + file);
  std::ostringstream ss;
  ss << in.rdbuf();
  auto annotations = cp::annotations_from_jsonl(ss.str(), file);
  auto aspect = cp::aspect_from_name(aspect_name);
  if (!aspect) cp::fail(cp::Errc::ConfigError, "unknown aspect: " + aspect_name);

  cp::WinRate w = cp::winrate(annotations, *aspect);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s  n=%zu  a=%.1f%%  neutral=%.1f%%  b=%.1f%%",
                aspect_name.c_str(), w.count, w.pct_a, w.pct_neutral, w.pct_b);
  std::cout << buf << "\n";
  nlohmann::ordered_json j{{"aspect", aspect_name},
                           {"count", w.count},
                           {"pct_a", w.pct_a},
                           {"pct_neutral", w.pct_neutral},
                           {"pct_b", w.pct_b}};
  if (!annotator_a.empty() || !annotator_b.empty()) {
    if (annotator_a.empty() || annotator_b.empty())
      cp::fail(cp::Errc::ConfigError, "kappa needs both --annotator-a and --annotator-b");
    double kappa = cp::cohen_kappa(annotations, annotator_a, annotator_b, *aspect);
    std::snprintf(buf, sizeof buf, "kappa(%s, %s) = %.4f", annotator_a.c_str(),
                  annotator_b.c_str(), kappa);
    std::cout << buf << "\n";
    j["kappa"] = nlohmann::ordered_json{
        {"annotator_a", annotator_a}, {"annotator_b", annotator_b}, {"value", kappa}};
  }
  if (!out_file.empty()) {
    std::ofstream out(out_file, std::ios::trunc);
    if (!out) cp::fail(cp::Errc::ConfigError, "cannot write " + out_file);
    out << j.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal reasoning tasks as code prompts: rendering, execution and evaluation"};
  app.set_version_flag("--version", std::string(cp::kToolName) + " " + cp::kVersion);
  app.require_subcommand(1);

  DataOptions data;
  ProviderOptions provider;
  std::string out_dir;
  long long index = 0;
  std::string run_a;
  std::string run_b;
  std::string run_dir;
  std::vector<std::string> run_dirs;
  std::vector<std::string> metrics;
  std::string embedder_kind;
  std::string baseline;
  double alpha = 0.01;
  int iterations = 10000;
  std::uint64_t seed = 12345;
  std::string out_file;
  long long sample = 100;
  std::string worksheet_file;
  std::string key_file;
  std::string annotations_file;
  std::string aspect;
  std::string annotator_a;
  std::string annotator_b;

  CLI::App* render = app.add_subcommand("render", "Render prompts without calling a provider");
  add_data_options(render, data);
  render->add_option("--out", out_dir, "write manifest.json and prompts.jsonl here");
  render->add_option("--index", index, "with no --out: print this prompt to stdout")
      ->capture_default_str();

  CLI::App* run = app.add_subcommand("run", "Execute the full pipeline into a run directory");
  add_data_options(run, data);
  add_provider_options(run, provider);
  run->add_option("--out", out_dir, "run directory to create")->required();

  CLI::App* score = app.add_subcommand("score", "Re-score an existing run directory");
  score->add_option("--run", run_dir, "run directory")->required();
  score->add_option("--metric", metrics, "metric to compute (repeatable; default: manifest)");
  score->add_option("--embedder", embedder_kind, "stub or none (default: manifest)");

  CLI::App* compare =
      app.add_subcommand("compare", "Paired bootstrap comparison of two scored runs");
  compare->add_option("--run-a", run_a, "first run directory (the claimed-better system)")
      ->required();
  compare->add_option("--run-b", run_b, "second run directory")->required();
  compare->add_option("--metric", metrics, "metric to test (repeatable; default: shared)");
  compare->add_option("--iterations", iterations, "bootstrap resamples")->capture_default_str();
  compare->add_option("--seed", seed, "bootstrap seed")->capture_default_str();
  compare->add_option("--out", out_file, "write the comparison as JSON here");

  CLI::App* report = app.add_subcommand("report", "Tabulate scored runs side by side");
  report->add_option("--run", run_dirs, "run directory (repeatable)")->required();
  report->add_option("--baseline", baseline,
                     "label to test every other system against for significance markers");
  report->add_option("--alpha", alpha, "significance level")->capture_default_str();
  report->add_option("--iterations", iterations, "bootstrap resamples")->capture_default_str();
  report->add_option("--seed", seed, "bootstrap seed")->capture_default_str();
  report->add_option("--out", out_file, "write the table as JSON here");

  CLI::App* export_cmd =
      app.add_subcommand("export-human-eval", "Write a blinded A/B worksheet for two runs");
  export_cmd->add_option("--run-a", run_a, "first run directory")->required();
  export_cmd->add_option("--run-b", run_b, "second run directory")->required();
  export_cmd->add_option("--sample", sample, "instances to sample")->capture_default_str();
  export_cmd->add_option("--seed", seed, "sampling and side-flip seed")->capture_default_str();
  export_cmd->add_option("--worksheet", worksheet_file, "worksheet output path")->required();
  export_cmd->add_option("--key", key_file, "unblinding key output path")->required();

  CLI::App* agreement =
      app.add_subcommand("agreement", "Win rates and annotator agreement from annotations");
  agreement->add_option("--annotations", annotations_file, "JSONL annotation file")->required();
  agreement->add_option("--aspect", aspect, "aspect to aggregate")->required();
  agreement->add_option("--annotator-a", annotator_a, "first annotator id for kappa");
  agreement->add_option("--annotator-b", annotator_b, "second annotator id for kappa");
  agreement->add_option("--out", out_file, "write the summary as JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // every usage problem maps to exit 1
  }

  try {
    if (*render) {
      do_render(data, out_dir, index);
    } else if (*run) {
      do_run(data, provider, out_dir);
    } else if (*score) {
      do_score(run_dir, metrics, embedder_kind);
    } else if (*compare) {
      do_compare(run_a, run_b, metrics, iterations, seed, out_file);
    } else if (*report) {
      do_report(run_dirs, baseline, alpha, iterations, seed, out_file);
    } else if (*export_cmd) {
      if (sample < 0) cp::fail(cp::Errc::ConfigError, "--sample must be >= 0");
      cp::export_human_eval(run_a, run_b, static_cast<std::size_t>(sample), seed, worksheet_file,
                            key_file);
      std::cout << "wrote " << worksheet_file << " and " << key_file << "\n";
    } else if (*agreement) {
      do_agreement(annotations_file, aspect, annotator_a, annotator_b, out_file);
    }
  } catch (const cp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cp::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
