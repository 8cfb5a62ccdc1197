#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "causalprompt/pipeline.hpp"

using namespace causalprompt;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& stem) {
    static int counter = 0;
    path = fs::temp_directory_path() /
           (stem + "_" + std::to_string(++counter) + "_" +
            std::to_string(static_cast<unsigned>(::getpid())));
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_abductive_dataset(const fs::path& dir) {
  fs::path p = dir / "abductive.jsonl";
  write_file(
      p,
      R"({"story_id": "s1", "obs1": "It rained all day.", "obs2": "The garden flourished.", "hyps": ["The rain watered the plants."]})"
      "\n"
      R"({"story_id": "s2", "obs1": "He missed the bus.", "obs2": "He arrived late.", "hyps": ["He walked to work instead.", "He waited for the next bus."]})"
      "\n"
      R"({"story_id": "s3", "obs1": "The oven beeped.", "obs2": "Dinner smelled wonderful.", "hyps": ["The roast had finished cooking."]})"
      "\n"
      R"({"story_id": "s4", "obs1": "She bought a ticket.", "obs2": "She cheered all night.", "hyps": ["She went to the concert."]})"
      "\n");
  return p;
}

fs::path write_counterfactual_dataset(const fs::path& dir) {
  fs::path p = dir / "counterfactual.jsonl";
  write_file(
      p,
      R"({"story_id": "c1", "premise": "My grandpa loved to fish.", "initial": "He would always take me.", "original_ending": "He set up my pole. It was fun. We caught a fish.", "counterfactual": "He never had time to take me.", "edited_endings": [["I set up my own pole.", "It was fun.", "I caught a fish."]]})"
      "\n"
      R"({"story_id": "c2", "premise": "Lena planted tomatoes.", "initial": "The summer was hot and sunny.", "original_ending": "The vines grew tall. She picked a basket every week.", "counterfactual": "The summer was cold and gray.", "edited_endings": [["The vines stayed small.", "She picked only a handful."]]})"
      "\n"
      R"({"story_id": "c3", "premise": "Tom adopted a puppy.", "initial": "The puppy chewed everything.", "original_ending": "Tom hid his shoes. The puppy found them anyway.", "counterfactual": "The puppy was calm and tidy.", "edited_endings": [["Tom left his shoes out.", "The puppy ignored them."]]})"
      "\n");
  return p;
}

RunConfig base_config(const fs::path& dataset, const fs::path& out_dir, Task task) {
  RunConfig config;
  config.dataset = dataset;
  config.mapping_preset = task == Task::Abductive ? "art" : "timetravel";
  config.spec.task = task;
  config.out_dir = out_dir;
  config.concurrency = 2;
  config.provider.retry.base_delay_ms = 1;
  return config;
}

// Builds a replay file for the given config: records carry the completions
// from the id->text map, keyed by the digests the gateway will compute.
fs::path make_replay_file(const fs::path& dir, const RunConfig& config,
                          const std::map<std::string, std::string>& completions,
                          const std::string& name = "replay.jsonl") {
  PreparedInstances prepared = prepare_instances(config);
  std::vector<RenderedPrompt> prompts = render_all(config, prepared);
  std::vector<RunRecord> records;
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    auto it = completions.find(prepared.id(i));
    if (it == completions.end()) continue;  // deliberately partial replay files
    DecodingParams resolved = config.params;
    if (resolved.stop.empty()) resolved.stop = prompts[i].stop_sequences;
    RunRecord r;
    r.instance_id = prepared.id(i);
    r.provider_id = "live";
    r.model_id = config.provider.model;
    r.params = resolved;
    r.prompt_digest = cache_key("live", config.provider.model, prompts[i].text, resolved);
    r.completion = it->second;
    r.finish_reason = "stop";
    r.created_at = "2026-01-01T00:00:00Z";
    r.attempts = 1;
    records.push_back(std::move(r));
  }
  fs::path p = dir / name;
  write_run_records(p, records);
  return p;
}

std::map<std::string, std::string> abductive_completions() {
  return {{"s1", " The rain watered the plants.\n"},
          {"s2", " He walked to work instead.\n"},
          {"s3", " The roast had  finished   cooking.\n"},  // messy spacing on purpose
          {"s4", " She went to the concert.\n"}};
}

std::vector<nlohmann::json> read_jsonl(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<nlohmann::json> rows;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(nlohmann::json::parse(line));
  return rows;
}

}  // namespace

// ---- preparation ------------------------------------------------------------------

TEST_CASE("subset sampling is seeded, deterministic and keeps dataset order") {
  TempDir dir("pipe_subset");
  fs::path dataset = write_abductive_dataset(dir.path);
  RunConfig config = base_config(dataset, dir.path / "out", Task::Abductive);
  config.subset = 2;
  config.sample_seed = 9;

  PreparedInstances first = prepare_instances(config);
  PreparedInstances second = prepare_instances(config);
  REQUIRE(first.size() == 2);
  CHECK(first.id(0) == second.id(0));
  CHECK(first.id(1) == second.id(1));
  CHECK(first.id(0) < first.id(1));  // s1..s4 sort like their dataset positions

  config.subset = 5;
  CHECK_THROWS_AS(prepare_instances(config), Error);
}

TEST_CASE("first-sentence trimming applies to endings and references") {
  TempDir dir("pipe_first");
  fs::path dataset = write_counterfactual_dataset(dir.path);
  RunConfig config = base_config(dataset, dir.path / "out", Task::Counterfactual);
  config.first_sentence = true;
  PreparedInstances prepared = prepare_instances(config);
  CHECK(prepared.counterfactual[0].original_ending.text == "He set up my pole.");
  CHECK(prepared.counterfactual[0].references[0] == "I set up my own pole.");
  // contexts are left whole
  CHECK(prepared.counterfactual[0].counterfactual_context.text ==
        "He never had time to take me.");
}

TEST_CASE("few-shot rendering needs a demo dataset") {
  TempDir dir("pipe_shots");
  fs::path dataset = write_abductive_dataset(dir.path);
  RunConfig config = base_config(dataset, dir.path / "out", Task::Abductive);
  config.spec.shots = 1;
  PreparedInstances prepared = prepare_instances(config);
  CHECK_THROWS_AS(render_all(config, prepared), Error);

  config.demo_dataset = dataset;
  std::vector<RenderedPrompt> prompts = render_all(config, prepared);
  REQUIRE(prompts.size() == 4);
  // the demo block (first dataset row, gold = first reference) leads each prompt
  CHECK(prompts[0].text.find("# The rain watered the plants.") != std::string::npos);
  CHECK(prompts[0].text.find("\n\n\n") != std::string::npos);
}

TEST_CASE("manifest captures the run configuration without timestamps") {
  TempDir dir("pipe_manifest");
  fs::path dataset = write_abductive_dataset(dir.path);
  RunConfig config = base_config(dataset, dir.path / "out", Task::Abductive);
  nlohmann::ordered_json manifest = build_manifest(config);
  CHECK(manifest.at("tool") == "causalprompt");
  CHECK(manifest.at("label") == config.spec.slug());
  CHECK(manifest.at("instruction").is_string());
  CHECK(manifest.at("metrics") ==
        nlohmann::json({"bleu4", "rouge_l", "cider", "bertscore"}));
  for (const auto& [key, value] : manifest.items()) {
    CHECK(key.find("time") == std::string::npos);
    CHECK(key.find("date") == std::string::npos);
    CHECK(key.find("created") == std::string::npos);
  }

  config.spec.interventions.no_instruction = true;
  CHECK(build_manifest(config).at("instruction").is_null());
  config.spec.interventions.no_instruction = false;
  config.label = "my-label";
  CHECK(build_manifest(config).at("label") == "my-label");
}

TEST_CASE("provider construction fails fast on bad configuration") {
  ProviderConfig p;
  p.kind = "replay";
  CHECK_THROWS_AS(make_provider(p), Error);  // no file given
  p.replay_file = "/nonexistent/replay.jsonl";
  CHECK_THROWS_AS(make_provider(p), Error);

  p = ProviderConfig{};
  p.kind = "http";
  p.endpoint_env = "CAUSALPROMPT_TEST_UNSET_ENDPOINT";
  p.api_key_env = "CAUSALPROMPT_TEST_UNSET_KEY";
  try {
    make_provider(p);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConfigError);
    CHECK(exit_code_for(e.code()) == 1);
  }
  p.endpoint = "http://localhost:1/v1/completions";
  CHECK_THROWS_AS(make_provider(p), Error);  // endpoint set, credential still missing

  p = ProviderConfig{};
  p.kind = "carrier-pigeon";
  CHECK_THROWS_AS(make_provider(p), Error);
}

// ---- end-to-end replay runs ---------------------------------------------------------

TEST_CASE("abductive pipeline produces a complete, scored run directory") {
  TempDir dir("pipe_run");
  fs::path dataset = write_abductive_dataset(dir.path);
  RunConfig config = base_config(dataset, dir.path / "out", Task::Abductive);
  config.label = "baseline";
  config.provider.replay_file = make_replay_file(dir.path, config, abductive_completions());

  fs::path out = run_pipeline(config);
  CHECK(out == config.out_dir);
  for (const char* name :
       {"manifest.json", "prompts.jsonl", "records.jsonl", "generations.jsonl",
        "score_report.json"})
    CHECK(fs::exists(out / name));
  CHECK_FALSE(fs::exists(out / "cache.jsonl"));  // folded into records.jsonl

  auto prompts = read_jsonl(out / "prompts.jsonl");
  REQUIRE(prompts.size() == 4);
  CHECK(prompts[0].at("instance_id") == "s1");
  CHECK(prompts[0].at("inputs").at("premise") == "It rained all day.");
  CHECK(prompts[0].at("references")[0] == "The rain watered the plants.");

  auto gens = read_jsonl(out / "generations.jsonl");
  REQUIRE(gens.size() == 4);
  CHECK(gens[0].at("text") == "The rain watered the plants.");
  CHECK(gens[2].at("text") == "The roast had finished cooking.");  // normalized
  for (const auto& g : gens) CHECK_FALSE(g.at("end_marker_missing").get<bool>());

  ScoreReport report = report_from_json(nlohmann::json::parse(read_file(out / "score_report.json")));
  CHECK(report.task == "abductive");
  CHECK(report.instance_ids == std::vector<std::string>{"s1", "s2", "s3", "s4"});
  REQUIRE(report.find("bleu4"));
  REQUIRE(report.find("cider"));
  CHECK(report.find("bleu4")->corpus == 100.0);  // completions equal the references
  CHECK(report.find("rouge_l")->corpus == 100.0);
  CHECK(report.config.at("label") == "baseline");
}

TEST_CASE("counterfactual pipeline scores rewrites with min_edit") {
  TempDir dir("pipe_cf");
  fs::path dataset = write_counterfactual_dataset(dir.path);
  RunConfig config = base_config(dataset, dir.path / "out", Task::Counterfactual);
  std::map<std::string, std::string> completions = {
      {"c1", " I set up my own pole.\n    # It was fun.\n    # I caught a fish.\n    # end"},
      {"c2", " The vines stayed small.\n    # She picked only a handful.\n    # end"},
      {"c3", " Tom left his shoes out.\n    # The puppy ignored them.\n    # end"}};
  config.provider.replay_file = make_replay_file(dir.path, config, completions);

  fs::path out = run_pipeline(config);
  auto gens = read_jsonl(out / "generations.jsonl");
  CHECK(gens[0].at("text") == "I set up my own pole. It was fun. I caught a fish.");

  ScoreReport report = report_from_json(nlohmann::json::parse(read_file(out / "score_report.json")));
  CHECK(report.task == "counterfactual");
  REQUIRE(report.find("min_edit"));
  CHECK(report.find("min_edit")->per_instance.size() == 3);
  // the rewrite shares most words with the original ending
  CHECK(report.find("min_edit")->per_instance[0] > 50.0);
  CHECK(report.find("bleu4")->corpus == 100.0);
}

TEST_CASE("replayed runs are byte-for-byte reproducible") {
  TempDir dir("pipe_repro");
  fs::path dataset = write_abductive_dataset(dir.path);
  RunConfig config = base_config(dataset, dir.path / "out1", Task::Abductive);
  config.provider.replay_file = make_replay_file(dir.path, config, abductive_completions());

  fs::path out1 = run_pipeline(config);
  config.out_dir = dir.path / "out2";
  fs::path out2 = run_pipeline(config);
  for (const char* name :
       {"manifest.json", "prompts.jsonl", "records.jsonl", "generations.jsonl",
        "score_report.json"})
    CHECK(read_file(out1 / name) == read_file(out2 / name));
}

TEST_CASE("a run resumes from an existing records file") {
  TempDir dir("pipe_resume");
  fs::path dataset = write_abductive_dataset(dir.path);
  RunConfig config = base_config(dataset, dir.path / "out", Task::Abductive);

  // replay only knows the first two instances
  auto partial = abductive_completions();
  partial.erase("s3");
  partial.erase("s4");
  config.provider.replay_file = make_replay_file(dir.path, config, partial);

  // without resume data the run must fail on the missing digest
  try {
    run_pipeline(config);
    FAIL("expected ReplayMiss");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ReplayMiss);
    CHECK(std::string(e.what()).find("instance 's3'") != std::string::npos);
  }

  // pre-seed the out dir with the "interrupted run's" records for s3/s4
  std::map<std::string, std::string> rest = {{"s3", " Resumed roast.\n"},
                                             {"s4", " Resumed concert.\n"}};
  fs::path rest_records = make_replay_file(dir.path, config, rest, "rest.jsonl");
  fs::copy_file(rest_records, config.out_dir / "records.jsonl",
                fs::copy_options::overwrite_existing);

  fs::path out = run_pipeline(config);
  auto gens = read_jsonl(out / "generations.jsonl");
  REQUIRE(gens.size() == 4);
  CHECK(gens[2].at("text") == "Resumed roast.");
  CHECK(gens[3].at("text") == "Resumed concert.");
  auto records = read_jsonl(out / "records.jsonl");
  REQUIRE(records.size() == 4);
  CHECK(records[0].at("instance_id") == "s1");
  CHECK(records[3].at("instance_id") == "s4");
}

TEST_CASE("a run resumes from a leftover cache file") {
  TempDir dir("pipe_cache_resume");
  fs::path dataset = write_abductive_dataset(dir.path);
  RunConfig config = base_config(dataset, dir.path / "out", Task::Abductive);

  auto partial = abductive_completions();
  partial.erase("s4");
  config.provider.replay_file = make_replay_file(dir.path, config, partial);

  std::map<std::string, std::string> rest = {{"s4", " Cached concert.\n"}};
  fs::path cached = make_replay_file(dir.path, config, rest, "cached.jsonl");
  fs::create_directories(config.out_dir);
  fs::copy_file(cached, config.out_dir / "cache.jsonl", fs::copy_options::overwrite_existing);

  fs::path out = run_pipeline(config);
  auto gens = read_jsonl(out / "generations.jsonl");
  CHECK(gens[3].at("text") == "Cached concert.");
  CHECK_FALSE(fs::exists(out / "cache.jsonl"));
}

TEST_CASE("extraction failures flag the instance instead of aborting") {
  std::vector<RunRecord> records(2);
  records[0].completion = " A fine hypothesis.\n";
  records[1].completion = "   \n";  // nothing extractable
  ExtractionRule rule;
  rule.kind = ExtractionKind::CommentLineUntilNewline;
  rule.comment_marker = "#";
  std::vector<ExtractionRule> rules = {rule, rule};
  std::vector<std::string> texts;
  std::vector<bool> flagged;
  extract_all(records, rules, texts, flagged);
  REQUIRE(texts.size() == 2);
  CHECK(texts[0] == "A fine hypothesis.");
  CHECK_FALSE(flagged[0]);
  CHECK(texts[1].empty());
  CHECK(flagged[1]);
}

TEST_CASE("completion failures carry the failing instance id") {
  auto provider = std::make_shared<ScriptedProvider>(std::vector<ScriptedProvider::Step>{});
  Gateway gw(provider, "m");
  RenderedPrompt rp;
  rp.text = "p";
  rp.stop_sequences = {"\n"};
  try {
    complete_all(gw, {rp}, {"inst-7"}, DecodingParams{}, 2);
    FAIL("expected ProviderError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ProviderError);
    CHECK(std::string(e.what()).find("instance 'inst-7'") != std::string::npos);
  }
}

// ---- human evaluation export ---------------------------------------------------------

TEST_CASE("human eval export pairs two runs into a blinded worksheet") {
  TempDir dir("pipe_export");
  fs::path dataset = write_abductive_dataset(dir.path);

  RunConfig config_a = base_config(dataset, dir.path / "run_a", Task::Abductive);
  config_a.label = "run-a";
  config_a.provider.replay_file = make_replay_file(dir.path, config_a, abductive_completions(),
                                                   "replay_a.jsonl");
  run_pipeline(config_a);

  RunConfig config_b = base_config(dataset, dir.path / "run_b", Task::Abductive);
  config_b.label = "run-b";
  config_b.spec.interventions.no_instruction = true;
  std::map<std::string, std::string> alt = {{"s1", " It was watered by hand.\n"},
                                            {"s2", " He overslept badly.\n"},
                                            {"s3", " Someone else cooked.\n"},
                                            {"s4", " She stayed home instead.\n"}};
  config_b.provider.replay_file =
      make_replay_file(dir.path, config_b, alt, "replay_b.jsonl");
  run_pipeline(config_b);

  fs::path worksheet = dir.path / "worksheet.jsonl";
  fs::path key = dir.path / "key.jsonl";
  export_human_eval(config_a.out_dir, config_b.out_dir, 3, 5, worksheet, key);

  auto sheet_rows = read_jsonl(worksheet);
  auto key_rows = read_jsonl(key);
  REQUIRE(sheet_rows.size() == 3);
  REQUIRE(key_rows.size() == 4);  // header + one per row
  CHECK(key_rows[0].at("system_a") == "run-a");
  CHECK(key_rows[0].at("system_b") == "run-b");

  auto gens_a = read_jsonl(config_a.out_dir / "generations.jsonl");
  auto gens_b = read_jsonl(config_b.out_dir / "generations.jsonl");
  std::map<std::string, std::string> text_a;
  std::map<std::string, std::string> text_b;
  for (const auto& g : gens_a) text_a[g.at("instance_id")] = g.at("text");
  for (const auto& g : gens_b) text_b[g.at("instance_id")] = g.at("text");

  for (std::size_t i = 0; i < sheet_rows.size(); ++i) {
    const auto& sheet = sheet_rows[i];
    const auto& k = key_rows[i + 1];
    CHECK(sheet.at("instance_id") == k.at("instance_id"));
    std::string id = sheet.at("instance_id");
    std::string left_label = k.at("left");
    std::string right_label = k.at("right");
    CHECK(left_label != right_label);
    CHECK((left_label == "run-a" || left_label == "run-b"));
    const auto& left_expected = left_label == "run-a" ? text_a[id] : text_b[id];
    const auto& right_expected = right_label == "run-a" ? text_a[id] : text_b[id];
    CHECK(sheet.at("left") == left_expected);
    CHECK(sheet.at("right") == right_expected);
    CHECK(sheet.at("aspects") ==
          nlohmann::json({"coherence_premise", "coherence_ending", "overall_coherence"}));
  }

  // deterministic for a fixed seed
  fs::path worksheet2 = dir.path / "worksheet2.jsonl";
  fs::path key2 = dir.path / "key2.jsonl";
  export_human_eval(config_a.out_dir, config_b.out_dir, 3, 5, worksheet2, key2);
  CHECK(read_file(worksheet) == read_file(worksheet2));
  CHECK(read_file(key) == read_file(key2));

  CHECK_THROWS_AS(export_human_eval(config_a.out_dir, config_b.out_dir, 99, 5,
                                    dir.path / "w.jsonl", dir.path / "k.jsonl"),
                  Error);
}

TEST_CASE("export refuses runs over different instances") {
  TempDir dir("pipe_export_mismatch");
  fs::path dataset = write_abductive_dataset(dir.path);

  RunConfig config_a = base_config(dataset, dir.path / "run_a", Task::Abductive);
  config_a.provider.replay_file = make_replay_file(dir.path, config_a, abductive_completions(),
                                                   "replay_a.jsonl");
  run_pipeline(config_a);

  RunConfig config_b = base_config(dataset, dir.path / "run_b", Task::Abductive);
  config_b.subset = 2;
  config_b.sample_seed = 1;
  config_b.provider.replay_file = make_replay_file(dir.path, config_b, abductive_completions(),
                                                   "replay_b.jsonl");
  run_pipeline(config_b);

  try {
    export_human_eval(config_a.out_dir, config_b.out_dir, 2, 5, dir.path / "w.jsonl",
                      dir.path / "k.jsonl");
    FAIL("expected InstanceMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InstanceMismatch);
  }
}

TEST_CASE("misaligned generations are detected when reading a run") {
  TempDir dir("pipe_misalign");
  fs::path dataset = write_abductive_dataset(dir.path);
  RunConfig config = base_config(dataset, dir.path / "out", Task::Abductive);
  config.provider.replay_file = make_replay_file(dir.path, config, abductive_completions());
  run_pipeline(config);

  // reverse the generation lines
  auto gens = read_jsonl(config.out_dir / "generations.jsonl");
  std::ostringstream ss;
  for (auto it = gens.rbegin(); it != gens.rend(); ++it) ss << it->dump() << "\n";
  write_file(config.out_dir / "generations.jsonl", ss.str());

  try {
    read_run_artifacts(config.out_dir);
    FAIL("expected InstanceMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InstanceMismatch);
  }
}
