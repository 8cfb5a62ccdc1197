#pragma once

// End-to-end run orchestration. A run directory is the unit of persistence:
//
//   manifest.json      config + version; enough to re-execute the run
//   prompts.jsonl      per instance: rendered prompt, stops, extraction rule,
//                      structured inputs and references
//   records.jsonl      raw completions (RunRecords) in instance order
//   generations.jsonl  extracted event texts (+ truncation flags)
//   score_report.json  metric scores over the extracted texts
//
// Under the replay provider a rerun reproduces every file byte-for-byte;
// fresh completions are appended to a transient cache file so an interrupted
// live run resumes without repeating paid requests.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalprompt/dataset.hpp"
#include "causalprompt/error.hpp"
#include "causalprompt/extract.hpp"
#include "causalprompt/gateway.hpp"
#include "causalprompt/http_provider.hpp"
#include "causalprompt/metrics.hpp"
#include "causalprompt/random.hpp"
#include "causalprompt/render.hpp"
#include "causalprompt/version.hpp"

namespace causalprompt {

struct ProviderConfig {
  std::string kind = "replay";  // "replay" or "http"
  std::string model = "fixture-model";
  std::filesystem::path replay_file;            // replay only
  std::string endpoint;                         // http only; falls back to endpoint_env
  std::string provider_id = "live";             // http only (replay impersonates its records)
  std::string endpoint_env = "CAUSALPROMPT_ENDPOINT";
  std::string api_key_env = "CAUSALPROMPT_API_KEY";
  RetryPolicy retry;
};

struct RunConfig {
  std::string label;  // row label in reports; defaults to PromptSpec::slug()
  std::filesystem::path dataset;
  std::string mapping_preset = "art";
  std::optional<std::filesystem::path> mapping_file;  // overrides the preset
  PromptSpec spec;
  std::optional<std::string> instruction;  // overrides the built-in task instruction
  bool first_sentence = false;             // counterfactual: first ending sentence only
  std::optional<std::filesystem::path> demo_dataset;  // few-shot demos (first spec.shots rows)
  ProviderConfig provider;
  DecodingParams params;
  std::optional<std::size_t> subset;
  std::uint64_t sample_seed = 0;
  int concurrency = 4;
  std::string embedder = "stub";  // "stub" or "none"
  std::vector<std::string> metrics;  // empty: task defaults
  bool permissive_load = false;
  std::filesystem::path out_dir;
};

inline std::vector<std::string> default_metrics(Task task) {
  if (task == Task::Abductive) return {"bleu4", "rouge_l", "cider", "bertscore"};
  return {"bleu4", "rouge_l", "bertscore", "min_edit"};
}

// Instances after loading, first-sentence trimming and subset sampling.
// Exactly one of the two vectors is populated.
struct PreparedInstances {
  Task task = Task::Abductive;
  std::vector<AbductiveInstance> abductive;
  std::vector<CounterfactualInstance> counterfactual;

  std::size_t size() const {
    return task == Task::Abductive ? abductive.size() : counterfactual.size();
  }
  const std::string& id(std::size_t i) const {
    return task == Task::Abductive ? abductive[i].id : counterfactual[i].id;
  }
  const std::vector<std::string>& references(std::size_t i) const {
    return task == Task::Abductive ? abductive[i].references : counterfactual[i].references;
  }
};

namespace detail {

inline FieldMapping resolve_mapping(const RunConfig& config) {
  if (config.mapping_file) {
    std::ifstream in(*config.mapping_file);
    if (!in) fail(Errc::ConfigError, "cannot open mapping file: " + config.mapping_file->string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      fail(Errc::ParseError, config.mapping_file->string() + ": " + e.what());
    }
    return mapping_from_json(j);
  }
  auto preset = preset_mapping(config.mapping_preset);
  if (!preset) fail(Errc::ConfigError, "unknown mapping preset: " + config.mapping_preset);
  return *preset;
}

// Seeded sampling without replacement; the chosen instances keep dataset order.
template <typename T>
void sample_subset(std::vector<T>& items, std::size_t subset, std::uint64_t seed) {
  if (subset > items.size())
    fail(Errc::ConfigError, "subset " + std::to_string(subset) + " exceeds dataset size " +
                                std::to_string(items.size()));
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx = random_permutation(items.size(), rng);
  idx.resize(subset);
  std::sort(idx.begin(), idx.end());
  std::vector<T> chosen;
  chosen.reserve(subset);
  for (std::size_t i : idx) chosen.push_back(std::move(items[i]));
  items = std::move(chosen);
}

}  // namespace detail

inline PreparedInstances prepare_instances(const RunConfig& config) {
  if (!std::filesystem::exists(config.dataset))
    fail(Errc::ConfigError, "dataset does not exist: " + config.dataset.string());
  FieldMapping mapping = detail::resolve_mapping(config);
  LoadOptions opts{config.permissive_load};
  PreparedInstances prepared;
  prepared.task = config.spec.task;
  if (config.spec.task == Task::Abductive) {
    prepared.abductive = load_abductive(config.dataset, mapping, opts);
    if (config.subset) detail::sample_subset(prepared.abductive, *config.subset, config.sample_seed);
  } else {
    prepared.counterfactual = load_counterfactual(config.dataset, mapping, opts);
    if (config.first_sentence)
      for (auto& inst : prepared.counterfactual) inst = to_first_sentence(inst);
    if (config.subset)
      detail::sample_subset(prepared.counterfactual, *config.subset, config.sample_seed);
  }
  if (prepared.size() == 0) fail(Errc::EmptyCorpus, "dataset is empty: " + config.dataset.string());
  return prepared;
}

namespace detail {

inline std::vector<ShotExample> load_demos(const RunConfig& config) {
  std::vector<ShotExample> demos;
  if (config.spec.shots == 0) return demos;
  if (!config.demo_dataset)
    fail(Errc::ConfigError, "shots > 0 requires a demo dataset");
  FieldMapping mapping = resolve_mapping(config);
  LoadOptions opts{config.permissive_load};
  auto take = [&demos, &config](auto instances) {
    if (instances.size() < static_cast<std::size_t>(config.spec.shots))
      fail(Errc::ShotMismatch, "demo dataset has " + std::to_string(instances.size()) +
                                   " rows, need " + std::to_string(config.spec.shots));
    for (int i = 0; i < config.spec.shots; ++i) {
      auto& inst = instances[static_cast<std::size_t>(i)];
      if (inst.references.empty())
        fail(Errc::ShotMismatch, "demo instance '" + inst.id + "' has no reference text");
      std::string gold = inst.references.front();
      demos.push_back(ShotExample{std::move(inst), std::move(gold)});
    }
  };
  if (config.spec.task == Task::Abductive)
    take(load_abductive(*config.demo_dataset, mapping, opts));
  else
    take(load_counterfactual(*config.demo_dataset, mapping, opts));
  return demos;
}

}  // namespace detail

inline std::vector<RenderedPrompt> render_all(const RunConfig& config,
                                              const PreparedInstances& prepared) {
  validate_spec(config.spec);
  std::vector<ShotExample> demos = detail::load_demos(config);
  std::vector<RenderedPrompt> prompts;
  prompts.reserve(prepared.size());
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    RenderedPrompt target =
        prepared.task == Task::Abductive
            ? render_prompt(prepared.abductive[i], config.spec, config.instruction)
            : render_prompt(prepared.counterfactual[i], config.spec, config.instruction);
    if (!demos.empty()) target = assemble_shots(demos, target, config.spec);
    prompts.push_back(std::move(target));
  }
  return prompts;
}

// ---- persistence -------------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json extraction_to_json(const ExtractionRule& rule) {
  return nlohmann::ordered_json{{"kind", extraction_kind_name(rule.kind)},
                                {"comment_marker", rule.comment_marker},
                                {"end_marker", rule.end_marker}};
}

inline ExtractionRule extraction_from_json(const nlohmann::json& j) {
  ExtractionRule rule;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "comment_line") rule.kind = ExtractionKind::CommentLineUntilNewline;
  else if (kind == "comment_block") rule.kind = ExtractionKind::CommentBlockUntilEndMarker;
  else if (kind == "string_literal") rule.kind = ExtractionKind::StringLiteral;
  else if (kind == "text_continuation") rule.kind = ExtractionKind::TextContinuation;
  else fail(Errc::ParseError, "unknown extraction kind: " + kind);
  rule.comment_marker = j.at("comment_marker").get<std::string>();
  rule.end_marker = j.at("end_marker").get<std::string>();
  return rule;
}

inline nlohmann::ordered_json inputs_to_json(const PreparedInstances& prepared, std::size_t i) {
  if (prepared.task == Task::Abductive) {
    const auto& inst = prepared.abductive[i];
    return nlohmann::ordered_json{{"premise", inst.premise.text}, {"ending", inst.ending.text}};
  }
  const auto& inst = prepared.counterfactual[i];
  return nlohmann::ordered_json{{"premise", inst.premise.text},
                                {"initial_context", inst.initial_context.text},
                                {"original_ending", inst.original_ending.text},
                                {"counterfactual_context", inst.counterfactual_context.text}};
}

}  // namespace detail

inline nlohmann::ordered_json build_manifest(const RunConfig& config) {
  std::string instruction = config.instruction ? *config.instruction
                                               : default_instruction(config.spec.task);
  nlohmann::ordered_json provider{{"kind", config.provider.kind},
                                  {"model", config.provider.model}};
  if (config.provider.kind == "replay") {
    provider["replay_file"] = config.provider.replay_file.string();
  } else {
    provider["provider_id"] = config.provider.provider_id;
    provider["endpoint_env"] = config.provider.endpoint_env;
    provider["api_key_env"] = config.provider.api_key_env;
  }
  return nlohmann::ordered_json{
      {"tool", kToolName},
      {"version", kVersion},
      {"label", config.label.empty() ? config.spec.slug() : config.label},
      {"dataset", config.dataset.string()},
      {"mapping", config.mapping_file ? "file:" + config.mapping_file->string()
                                      : config.mapping_preset},
      {"first_sentence", config.first_sentence},
      {"spec", spec_to_json(config.spec)},
      {"instruction", config.spec.interventions.canonical().no_instruction
                          ? nlohmann::ordered_json(nullptr)
                          : nlohmann::ordered_json(instruction)},
      {"demo_dataset",
       config.demo_dataset ? nlohmann::ordered_json(config.demo_dataset->string())
                           : nlohmann::ordered_json(nullptr)},
      {"params",
       {{"temperature", config.params.temperature},
        {"top_p", config.params.top_p},
        {"max_tokens", config.params.max_tokens},
        {"stop", config.params.stop}}},
      {"provider", provider},
      {"subset", config.subset ? nlohmann::ordered_json(*config.subset)
                               : nlohmann::ordered_json(nullptr)},
      {"sample_seed", config.sample_seed},
      {"concurrency", config.concurrency},
      {"embedder", config.embedder},
      {"metrics", config.metrics.empty() ? default_metrics(config.spec.task) : config.metrics},
      {"permissive_load", config.permissive_load},
  };
}

inline void write_prompts_file(const std::filesystem::path& path,
                               const PreparedInstances& prepared,
                               const std::vector<RenderedPrompt>& prompts) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::ConfigError, "cannot write " + path.string());
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    nlohmann::ordered_json row{
        {"instance_id", prepared.id(i)},
        {"prompt", prompts[i].text},
        {"stop_sequences", prompts[i].stop_sequences},
        {"extraction", detail::extraction_to_json(prompts[i].extraction)},
        {"inputs", detail::inputs_to_json(prepared, i)},
        {"references", prepared.references(i)},
    };
    out << row.dump() << "\n";
  }
}

// ---- run stage -----------------------------------------------------------------

// Provider configuration resolves eagerly (before any rendering) so a missing
// credential or replay file aborts the run immediately.
inline std::shared_ptr<CompletionProvider> make_provider(const ProviderConfig& config) {
  if (config.kind == "replay") {
    if (config.replay_file.empty())
      fail(Errc::ConfigError, "replay provider needs a replay file");
    if (!std::filesystem::exists(config.replay_file))
      fail(Errc::ConfigError, "replay file does not exist: " + config.replay_file.string());
    return std::make_shared<ReplayProvider>(config.replay_file);
  }
  if (config.kind == "http") {
    HttpProviderConfig http;
    http.provider_id = config.provider_id;
    http.endpoint = config.endpoint;
    if (http.endpoint.empty()) {
      const char* env = std::getenv(config.endpoint_env.c_str());
      if (!env || !*env)
        fail(Errc::ConfigError, "no endpoint given and " + config.endpoint_env + " is unset");
      http.endpoint = env;
    }
    const char* key = std::getenv(config.api_key_env.c_str());
    if (!key || !*key)
      fail(Errc::ConfigError, "credential variable " + config.api_key_env + " is unset");
    http.api_key = key;
    return std::make_shared<HttpProvider>(std::move(http));
  }
  fail(Errc::ConfigError, "unknown provider kind: " + config.kind);
}

// Fans instances out to a bounded worker pool; the first failure wins and is
// rethrown with its instance id. Successes are kept (and cached), so a rerun
// resumes where the failure happened.
inline std::vector<RunRecord> complete_all(Gateway& gateway,
                                           const std::vector<RenderedPrompt>& prompts,
                                           const std::vector<std::string>& ids,
                                           const DecodingParams& params, int concurrency) {
  const std::size_t n = prompts.size();
  std::vector<RunRecord> records(n);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  std::string failed_instance;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        records[i] = gateway.complete(prompts[i], params, ids[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) {
          first_error = std::current_exception();
          failed_instance = ids[i];
          next.store(n);  // drain remaining work
        }
        return;
      }
    }
  };

  int threads = std::max(1, std::min<int>(concurrency, static_cast<int>(n)));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const Error& e) {
      fail(e.code(), "instance '" + failed_instance + "': " + e.message());
    }
  }
  return records;
}

inline void write_generations_file(const std::filesystem::path& path,
                                   const std::vector<std::string>& ids,
                                   const std::vector<std::string>& texts,
                                   const std::vector<bool>& flagged) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::ConfigError, "cannot write " + path.string());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    nlohmann::ordered_json row{{"instance_id", ids[i]},
                               {"text", texts[i]},
                               {"end_marker_missing", static_cast<bool>(flagged[i])}};
    out << row.dump() << "\n";
  }
}

// Extraction across a batch: an EmptyExtraction on one instance yields an
// empty candidate (scored 0) plus a flag instead of aborting the whole run.
inline void extract_all(const std::vector<RunRecord>& records,
                        const std::vector<ExtractionRule>& rules,
                        std::vector<std::string>& texts, std::vector<bool>& flagged) {
  texts.clear();
  flagged.clear();
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      Extraction ex = extract(records[i].completion, rules[i]);
      texts.push_back(ex.text);
      flagged.push_back(ex.end_marker_missing);
    } catch (const Error& e) {
      if (e.code() != Errc::EmptyExtraction && e.code() != Errc::UnterminatedLiteral) throw;
      texts.emplace_back();
      flagged.push_back(true);
    }
  }
}

inline ScoreReport score_run(const RunConfig& config, const PreparedInstances& prepared,
                             const std::vector<std::string>& generation_texts) {
  std::vector<std::string> ids;
  std::vector<std::vector<std::string>> references;
  std::vector<std::string> originals;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    ids.push_back(prepared.id(i));
    if (prepared.references(i).empty())
      fail(Errc::EmptyCorpus, "instance '" + prepared.id(i) + "' has no references to score against");
    references.push_back(prepared.references(i));
    if (prepared.task == Task::Counterfactual)
      originals.push_back(prepared.counterfactual[i].original_ending.text);
  }
  std::unique_ptr<TokenEmbedder> embedder;
  if (config.embedder == "stub") embedder = std::make_unique<HashedStubEmbedder>();
  else if (config.embedder != "none")
    fail(Errc::ConfigError, "unknown embedder: " + config.embedder);

  std::vector<std::string> metric_names =
      config.metrics.empty() ? default_metrics(config.spec.task) : config.metrics;
  ScoreReport report = compute_scores(task_name(config.spec.task), ids, generation_texts,
                                      references, originals, metric_names, embedder.get());
  report.config = nlohmann::ordered_json{
      {"label", config.label.empty() ? config.spec.slug() : config.label},
      {"spec", spec_to_json(config.spec)},
      {"params",
       {{"temperature", config.params.temperature},
        {"top_p", config.params.top_p},
        {"max_tokens", config.params.max_tokens},
        {"stop", config.params.stop}}},
      {"provider", {{"kind", config.provider.kind}, {"model", config.provider.model}}},
      {"embedder", embedder ? embedder->id() : "none"},
  };
  return report;
}

// Full pipeline: load, render, complete, extract, score, persist.
inline std::filesystem::path run_pipeline(const RunConfig& config) {
  validate_spec(config.spec);
  validate_params(config.params);
  if (config.concurrency < 1) fail(Errc::ConfigError, "concurrency must be >= 1");

  // Fail fast on provider configuration before touching the dataset.
  std::shared_ptr<CompletionProvider> provider = make_provider(config.provider);

  PreparedInstances prepared = prepare_instances(config);
  std::vector<RenderedPrompt> prompts = render_all(config, prepared);

  std::filesystem::create_directories(config.out_dir);
  {
    std::ofstream out(config.out_dir / "manifest.json", std::ios::trunc);
    if (!out) fail(Errc::ConfigError, "cannot write manifest in " + config.out_dir.string());
    out << build_manifest(config).dump(2) << "\n";
  }
  write_prompts_file(config.out_dir / "prompts.jsonl", prepared, prompts);

  Gateway gateway(provider, config.provider.model, config.provider.retry);
  const std::filesystem::path records_path = config.out_dir / "records.jsonl";
  const std::filesystem::path cache_path = config.out_dir / "cache.jsonl";
  if (std::filesystem::exists(records_path)) gateway.preload_cache(read_run_records(records_path));
  if (std::filesystem::exists(cache_path)) gateway.preload_cache(read_run_records(cache_path));
  gateway.set_cache_file(cache_path);

  std::vector<std::string> ids;
  ids.reserve(prepared.size());
  for (std::size_t i = 0; i < prepared.size(); ++i) ids.push_back(prepared.id(i));
  std::vector<RunRecord> records =
      complete_all(gateway, prompts, ids, config.params, config.concurrency);
  write_run_records(records_path, records);
  std::filesystem::remove(cache_path);  // folded into records.jsonl

  std::vector<ExtractionRule> rules;
  rules.reserve(prompts.size());
  for (const auto& p : prompts) rules.push_back(p.extraction);
  std::vector<std::string> texts;
  std::vector<bool> flagged;
  extract_all(records, rules, texts, flagged);
  write_generations_file(config.out_dir / "generations.jsonl", ids, texts, flagged);

  ScoreReport report = score_run(config, prepared, texts);
  {
    std::ofstream out(config.out_dir / "score_report.json", std::ios::trunc);
    if (!out) fail(Errc::ConfigError, "cannot write score report in " + config.out_dir.string());
    out << report_to_json(report).dump(2) << "\n";
  }
  return config.out_dir;
}

// ---- worksheet export ------------------------------------------------------------

// Reads one run directory's pieces needed for human evaluation export.
struct RunArtifacts {
  std::string label;
  std::string task;
  std::vector<std::string> ids;
  std::vector<nlohmann::json> inputs;      // aligned with ids
  std::vector<std::string> generations;    // aligned with ids
};

inline RunArtifacts read_run_artifacts(const std::filesystem::path& run_dir) {
  RunArtifacts art;
  {
    std::ifstream in(run_dir / "manifest.json");
    if (!in) fail(Errc::ConfigError, "missing manifest in " + run_dir.string());
    nlohmann::json manifest;
    try {
      in >> manifest;
    } catch (const nlohmann::json::parse_error& e) {
      fail(Errc::ParseError, run_dir.string() + "/manifest.json: " + e.what());
    }
    art.label = manifest.value("label", run_dir.filename().string());
    art.task = manifest.at("spec").value("task", "abductive");
  }
  std::ifstream prompts(run_dir / "prompts.jsonl");
  if (!prompts) fail(Errc::ConfigError, "missing prompts.jsonl in " + run_dir.string());
  std::string line;
  while (std::getline(prompts, line)) {
    if (trim_view(line).empty()) continue;
    nlohmann::json row = nlohmann::json::parse(line);
    art.ids.push_back(row.at("instance_id").get<std::string>());
    art.inputs.push_back(row.at("inputs"));
  }
  std::ifstream gens(run_dir / "generations.jsonl");
  if (!gens) fail(Errc::ConfigError, "missing generations.jsonl in " + run_dir.string());
  std::size_t i = 0;
  while (std::getline(gens, line)) {
    if (trim_view(line).empty()) continue;
    nlohmann::json row = nlohmann::json::parse(line);
    if (i >= art.ids.size() || row.at("instance_id").get<std::string>() != art.ids[i])
      fail(Errc::InstanceMismatch, "generations do not align with prompts in " + run_dir.string());
    art.generations.push_back(row.at("text").get<std::string>());
    ++i;
  }
  if (art.generations.size() != art.ids.size())
    fail(Errc::InstanceMismatch, "generations missing for some prompts in " + run_dir.string());
  return art;
}

// Writes a blinded annotation worksheet comparing two runs plus the key file
// that unblinds it. Sides are shuffled per row with the given seed.
inline void export_human_eval(const std::filesystem::path& run_a,
                              const std::filesystem::path& run_b, std::size_t sample_size,
                              std::uint64_t seed, const std::filesystem::path& worksheet_path,
                              const std::filesystem::path& key_path) {
  RunArtifacts a = read_run_artifacts(run_a);
  RunArtifacts b = read_run_artifacts(run_b);
  if (a.ids != b.ids)
    fail(Errc::InstanceMismatch, "runs cover different instances; cannot pair outputs");
  if (sample_size > a.ids.size())
    fail(Errc::ConfigError, "sample size " + std::to_string(sample_size) +
                                " exceeds run size " + std::to_string(a.ids.size()));

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx = random_permutation(a.ids.size(), rng);
  idx.resize(sample_size);
  std::sort(idx.begin(), idx.end());

  std::vector<std::string> aspects =
      a.task == "abductive"
          ? std::vector<std::string>{"coherence_premise", "coherence_ending", "overall_coherence"}
          : std::vector<std::string>{"coherence", "preservation"};

  std::ofstream worksheet(worksheet_path, std::ios::trunc);
  if (!worksheet) fail(Errc::ConfigError, "cannot write " + worksheet_path.string());
  std::ofstream key(key_path, std::ios::trunc);
  if (!key) fail(Errc::ConfigError, "cannot write " + key_path.string());

  key << nlohmann::ordered_json{{"system_a", a.label}, {"system_b", b.label}}.dump() << "\n";
  for (std::size_t i : idx) {
    bool a_left = uniform_below(rng, 2) == 0;
    nlohmann::ordered_json row{
        {"instance_id", a.ids[i]},
        {"inputs", a.inputs[i]},
        {"left", a_left ? a.generations[i] : b.generations[i]},
        {"right", a_left ? b.generations[i] : a.generations[i]},
        {"aspects", aspects},
    };
    worksheet << row.dump() << "\n";
    key << nlohmann::ordered_json{{"instance_id", a.ids[i]},
                                  {"left", a_left ? a.label : b.label},
                                  {"right", a_left ? b.label : a.label}}
               .dump()
        << "\n";
  }
}

}  // namespace causalprompt
