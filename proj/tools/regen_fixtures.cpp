// Regenerates every committed fixture from scratch, deterministically:
//
//   fixtures/datasets/        two 10-instance story datasets
//   fixtures/golden_prompts/  one golden rendering per valid variant of the
//                             first instance of each dataset
//   fixtures/replay/          recorded completions that stand in for a live
//                             provider during offline end-to-end runs
//   fixtures/golden_run/      two full run directories plus a combined report
//   fixtures/annotations/     pairwise preference ratings with known tallies
//
// Usage: regen_fixtures [repo_root]. Rerunning must be a no-op on a clean
// tree; anything that changes here is a deliberate fixture break.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "causalprompt/causalprompt.hpp"

namespace cp = causalprompt;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Disruption seed frozen together with the committed goldens; the acceptance
// sweep renders with the same value.
constexpr std::uint64_t kGoldenSeed = 7;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) cp::fail(cp::Errc::ConfigError, "cannot write " + path.string());
  out << content;
}

void write_jsonl(const fs::path& path, const std::vector<ordered_json>& rows) {
  std::string content;
  for (const auto& row : rows) content += row.dump() + "\n";
  write_file(path, content);
}

// ---- datasets -----------------------------------------------------------------

// First instance of each dataset is the worked example the golden prompts
// render; the rest are small original stories exercising one-to-three
// references per instance.
std::vector<ordered_json> abductive_rows() {
  auto row = [](const char* id, const char* premise, const char* ending,
                std::vector<std::string> hyps) {
    return ordered_json{{"story_id", id}, {"obs1", premise}, {"obs2", ending}, {"hyps", hyps}};
  };
  return {
      row("a01", "Angie went to a cocktail party hosted by her best friend.",
          "Angie decided to be quiet about what she overheard.",
          {"Angie overheard her best friend talking about her behind her back.",
           "Angie overheard something that she felt was better left unsaid."}),
      row("a02", "Marcus planted tomato seedlings along the back fence.",
          "By August he was giving bags of tomatoes to every neighbor.",
          {"The plants thrived in the warm summer sun.",
           "Every seedling grew faster than he expected."}),
      row("a03", "Priya signed up for a beginner pottery class.",
          "Her shelf now holds a dozen lopsided but beloved bowls.",
          {"She kept practicing even though her first pots collapsed."}),
      row("a04", "The power went out across the whole block at dinnertime.",
          "The kids still talk about the best dinner party ever.",
          {"The family lit candles and ate pancakes by candlelight."}),
      row("a05", "Omar trained every morning before work for months.",
          "He crossed the marathon finish line with his arms raised.",
          {"All the early runs built the endurance he needed.",
           "His training carried him through all twenty-six miles."}),
      row("a06", "A stray cat kept showing up on Lena's porch.",
          "Now the cat sleeps at the foot of her bed every night.",
          {"Lena started feeding the cat and finally adopted it."}),
      row("a07", "Sam forgot his umbrella on the morning train.",
          "He arrived at the office completely soaked.",
          {"It started pouring while he walked from the station."}),
      row("a08", "The bakery put a help-wanted sign in the window.",
          "Rosa now wakes at four to pull bread from the ovens.",
          {"Rosa applied for the baker job and was hired."}),
      row("a09", "Dev's old laptop began crashing every hour.",
          "His thesis draft survived without losing a word.",
          {"He had backed up the draft to the cloud the week before.",
           "He saved copies of his work everywhere just in case."}),
      row("a10", "The choir booked the town hall for a winter concert.",
          "They had to turn people away at the door.",
          {"Far more listeners showed up than the hall could seat."}),
  };
}

std::vector<ordered_json> counterfactual_rows() {
  auto row = [](const char* id, const char* premise, const char* initial, const char* original,
                const char* counterfactual, std::vector<std::string> edited) {
    return ordered_json{{"story_id", id},
                        {"premise", premise},
                        {"initial", initial},
                        {"original_ending", original},
                        {"counterfactual", counterfactual},
                        {"edited_endings", edited}};
  };
  return {
      row("c01", "My grandpa took my brothers and I fishing in the summer.",
          "We went to a small pond close to his house.",
          "He set up our fishing poles and we began to fish. It was so boring when nobody "
          "caught any fish. We were disappointed to go home empty handed that day.",
          "We caught four huge trouts within the first hour.",
          {"He set up our fishing poles and we began to fish. It was so exciting when we "
           "caught four huge trouts within the first hour. We were happy to go home with "
           "four trouts that day."}),
      row("c02", "Nina entered her chili in the county cook-off.",
          "She followed her usual mild recipe.",
          "The judges found the chili pleasant but forgettable. She went home without a "
          "ribbon. Nina promised herself she would be bolder next year.",
          "She doubled the smoked peppers at the last minute.",
          {"The judges found the chili bold and unforgettable. She went home with the blue "
           "ribbon. Nina promised herself she would trust her instincts from then on."}),
      row("c03", "Jon's band got a slot at the street fair.",
          "They rehearsed their old set twice the night before.",
          "The crowd nodded along politely. A few people clapped between songs. The band "
          "packed up feeling it had gone fine.",
          "Their drummer came down with the flu the night before.",
          {"The crowd watched them scramble with a borrowed drum machine. A few people "
           "clapped out of sympathy. The band packed up feeling lucky to have finished at "
           "all."}),
      row("c04", "Mara saved all spring for a beach vacation.",
          "She booked a week at a quiet seaside cottage.",
          "She spent every morning reading on the sand. The waves put her to sleep each "
          "night. She came home rested and tan.",
          "A storm closed the coast the day she arrived.",
          {"She spent every morning reading by the cottage window. The rain on the roof put "
           "her to sleep each night. She came home rested, if a little pale.",
           "She spent the week in the cottage watching the storm. The thunder kept her up "
           "most nights. She came home rested but not tan."}),
      row("c05", "Grandma taught Ben her dumpling recipe.",
          "He wrote every step on an index card.",
          "Ben practiced the folds until his fingers ached. His first batch came out almost "
          "perfect. Grandma declared him the family's next dumpling cook.",
          "He lost the card on the bus ride home.",
          {"Ben practiced the folds from memory until his fingers ached. His first batch "
           "came out lumpy but tasty. Grandma laughed and wrote him a new card."}),
      row("c06", "The library announced a summer reading contest.",
          "Tasha set a goal of twenty books.",
          "She read on the bus and at lunch. By August she had finished twenty-two. The "
          "librarian pinned her name at the top of the board.",
          "Tasha broke her glasses the first week.",
          {"She listened to audiobooks on the bus and at lunch. By August she had finished "
           "nineteen. The librarian pinned her name near the top of the board anyway."}),
      row("c07", "Diego found a wobbly old table by the curb.",
          "He hauled it home to refinish it.",
          "He sanded the top smooth and tightened every joint. A coat of oil brought out "
          "the grain. The table now anchors his kitchen.",
          "The legs turned out to be riddled with woodworm.",
          {"He salvaged the top and built four new legs. A coat of oil brought out the "
           "grain. The table now anchors his kitchen."}),
      row("c08", "Amira volunteered at the animal shelter on weekends.",
          "She mostly walked the older dogs.",
          "One gray-muzzled beagle always waited by the gate for her. After a month she "
          "filled out the adoption papers. The beagle now naps in a sunbeam in her hallway.",
          "The shelter asked her to foster a litter of kittens instead.",
          {"One bold orange kitten always climbed onto her shoulder. After a month she "
           "filled out the adoption papers. The kitten now naps in a sunbeam in her "
           "hallway."}),
      row("c09", "The school garden club planted pumpkins in May.",
          "The summer stayed warm and wet.",
          "The vines swallowed half the yard by September. The biggest pumpkin weighed "
          "forty pounds. The club sold pies at the fall fair.",
          "A drought settled in by the end of June.",
          {"The vines barely crossed the garden beds by September. The biggest pumpkin "
           "weighed four pounds. The club sold seed packets at the fall fair instead."}),
      row("c10", "Felix started a tiny repair stand at the flea market.",
          "At first only a neighbor brought him a broken toaster.",
          "Word spread about the kid who could fix anything. Soon there was a line at his "
          "stand every Sunday. He saved enough to buy a proper set of tools.",
          "A rainstorm flooded the market on his first day.",
          {"Word spread about the kid bailing water off his stand. Soon there was a line of "
           "vendors needing help every Sunday. He earned enough goodwill to get a proper "
           "covered booth."}),
  };
}

// What the recorded "model" answered for each instance of the golden code
// runs. A few are verbatim references (pinning the score ceiling); the rest
// are paraphrases so the metric columns spread out.
std::vector<std::string> abductive_outputs() {
  return {
      "Angie overheard her best friend talking about her behind her back.",
      "The warm summer sun helped every plant thrive.",
      "She kept practicing even though her first pots collapsed.",
      "The family lit candles and made a game of eating pancakes in the dark.",
      "Months of early training gave him the endurance to finish.",
      "Lena started feeding the cat and finally adopted it.",
      "A heavy rain caught him between the station and the office.",
      "Rosa applied for the baker job and was hired.",
      "He had saved a backup of the draft online days earlier.",
      "The concert drew a much bigger crowd than the hall could hold.",
  };
}

std::vector<std::string> counterfactual_outputs() {
  return {
      "He set up our fishing poles and we began to fish. It was so exciting when we caught "
      "four huge trouts within the first hour. We were happy to go home with four trouts "
      "that day.",
      "The judges found the chili bold and memorable. She went home with the blue ribbon. "
      "Nina promised herself she would trust her instincts.",
      "The crowd watched them scramble with a borrowed drum machine. A few people clapped "
      "out of sympathy. The band packed up feeling lucky to have finished at all.",
      "She spent every morning reading by the window. The rain put her to sleep each "
      "night. She came home rested but pale.",
      "Ben practiced the folds from memory until his fingers ached. His first batch came "
      "out lumpy but tasty. Grandma laughed and wrote him a new card.",
      "She borrowed audiobooks for the bus and lunch breaks. By August she had finished "
      "nineteen. The librarian still pinned her name near the top of the board.",
      "He salvaged the top and built four new legs. A coat of oil brought out the grain. "
      "The table now anchors his kitchen.",
      "One bold orange kitten always climbed her shoulder. After a month she filled out "
      "the adoption papers. The kitten now sleeps in a sunbeam in her hallway.",
      "The vines barely crossed the garden beds by September. The biggest pumpkin weighed "
      "four pounds. The club sold seed packets at the fall fair instead.",
      "Word spread about the kid bailing water off his stand. Soon vendors lined up "
      "needing help every Sunday. He earned enough goodwill to get a covered booth.",
  };
}

// Answers recorded for the text-style baseline runs: deliberately looser so
// the two rows of each per-task report differ and the paired comparisons have
// something to measure.
std::vector<std::string> abductive_text_outputs() {
  return {
      "She heard some gossip at the party.",
      "His garden did very well that summer.",
      "She kept taking the class every week.",
      "They had dinner by candlelight.",
      "He trained hard for the race.",
      "She decided to keep the cat.",
      "It rained hard on his way to work.",
      "Rosa got a job at the bakery.",
      "He had a copy of his thesis saved.",
      "Many people came to the concert.",
  };
}

std::vector<std::string> counterfactual_text_outputs() {
  return {
      "We caught a lot of fish that day. Grandpa was proud of us. We went home happy.",
      "The judges loved the spicy chili. Nina won first place. She was glad she took the "
      "risk.",
      "They played without a drummer. The crowd still clapped. The band was relieved when "
      "it ended.",
      "She stayed inside all week because of the storm. She read by the window each "
      "morning. She came home rested but pale.",
      "Ben tried to remember the steps. His dumplings came out uneven. Grandma helped him "
      "write the recipe again.",
      "Tasha listened to audiobooks instead. She finished nineteen books. Her name still "
      "made the board.",
      "He replaced the ruined legs with new ones. The oiled top looked beautiful. The "
      "table sits in his kitchen now.",
      "A little orange kitten took a liking to her. She adopted it after a month. It "
      "sleeps in her hallway.",
      "The vines stayed small in the dry heat. The best pumpkin was tiny. The club sold "
      "seeds at the fair.",
      "He spent the day bailing water. The vendors were grateful for his help. He got a "
      "covered booth out of it.",
  };
}

// ---- golden runs --------------------------------------------------------------

// The configurations both the committed golden runs and the acceptance
// re-runs use: per task, a code run and a text-style baseline over the same
// instances. Paths are relative to the repository root on purpose so the
// manifests stay portable.
cp::RunConfig golden_config(cp::Task task, cp::Style style) {
  const bool abductive = task == cp::Task::Abductive;
  const char* stem = abductive ? "abductive" : "counterfactual";
  std::string name = style == cp::Style::Text ? std::string(stem) + "_text" : stem;
  cp::RunConfig config;
  config.spec.task = task;  // code specs stay plain / python, no interventions
  config.spec.style = style;
  config.dataset = abductive ? "fixtures/datasets/abductive_small.jsonl"
                             : "fixtures/datasets/counterfactual_small.jsonl";
  config.mapping_preset = abductive ? "art" : "timetravel";
  config.provider.kind = "replay";
  config.provider.model = "fixture-model";
  config.provider.replay_file = "fixtures/replay/" + name + ".jsonl";
  config.params.max_tokens = abductive ? 64 : 128;
  config.concurrency = 2;
  config.out_dir = "fixtures/golden_run/" + name;
  return config;
}

// Builds the replay record file for one task: every prompt the run will send,
// paired with the scripted completion cut the way a live provider response
// would have been stored.
void write_replay_file(const cp::RunConfig& config, const std::vector<std::string>& outputs) {
  cp::PreparedInstances prepared = cp::prepare_instances(config);
  std::vector<cp::RenderedPrompt> prompts = cp::render_all(config, prepared);
  if (prompts.size() != outputs.size())
    cp::fail(cp::Errc::ConfigError, "one scripted output per instance required");

  std::vector<cp::RunRecord> records;
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    cp::DecodingParams resolved = config.params;
    if (resolved.stop.empty()) resolved.stop = prompts[i].stop_sequences;

    std::string completion =
        cp::complete_rendering(prompts[i], outputs[i]).substr(prompts[i].text.size());
    bool has_stop = false;
    for (const auto& s : resolved.stop)
      if (completion.find(s) != std::string::npos) has_stop = true;
    if (!has_stop) completion += resolved.stop.front();  // cut falls exactly on the stop

    cp::RunRecord r;
    r.instance_id = prepared.id(i);
    r.prompt_digest = cp::cache_key("live", config.provider.model, prompts[i].text, resolved);
    r.provider_id = "live";
    r.model_id = config.provider.model;
    r.params = resolved;
    r.completion = completion;
    r.finish_reason = "stop";
    char ts[32];
    std::snprintf(ts, sizeof ts, "2026-03-05T12:00:%02zuZ", i);
    r.created_at = ts;
    r.attempts = 1;
    records.push_back(std::move(r));
  }
  cp::write_run_records(config.provider.replay_file, records);
}

// ---- annotations --------------------------------------------------------------

// Pairwise preference tallies: 100 shared instances, two raters, five aspects.
// The per-aspect (a, neutral, b) counts out of 200 are the fixture's contract;
// tests assert the aggregate percentages they imply.
void write_annotation_fixtures() {
  struct AspectCounts {
    const char* aspect;
    int a;
    int neutral;
    int b;
  };
  const std::vector<AspectCounts> tallies = {
      {"coherence_premise", 68, 97, 35}, {"coherence_ending", 64, 85, 51},
      {"overall_coherence", 80, 76, 44}, {"coherence", 73, 79, 48},
      {"preservation", 95, 79, 26},
  };
  std::vector<ordered_json> rows;
  for (const auto& t : tallies) {
    for (int s = 0; s < 200; ++s) {
      char id[8];
      std::snprintf(id, sizeof id, "ex%03d", s / 2 + 1);
      const char* verdict = s < t.a ? "a" : (s < t.a + t.neutral ? "neutral" : "b");
      rows.push_back(ordered_json{{"instance_id", id},
                                  {"annotator_id", s % 2 == 0 ? "r1" : "r2"},
                                  {"aspect", t.aspect},
                                  {"verdict", verdict}});
    }
  }
  write_jsonl("fixtures/annotations/human_eval_200.jsonl", rows);

  // Two raters who always concur across all three verdict categories.
  rows.clear();
  const char* cycle[3] = {"a", "neutral", "b"};
  for (int i = 0; i < 12; ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "ex%02d", i + 1);
    for (const char* annotator : {"r1", "r2"})
      rows.push_back(ordered_json{{"instance_id", id},
                                  {"annotator_id", annotator},
                                  {"aspect", "overall_coherence"},
                                  {"verdict", cycle[i % 3]}});
  }
  write_jsonl("fixtures/annotations/perfect_agreement.jsonl", rows);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    if (argc > 1) fs::current_path(argv[1]);
    for (const char* dir : {"fixtures/datasets", "fixtures/golden_prompts", "fixtures/replay",
                            "fixtures/annotations", "fixtures/golden_run"})
      fs::create_directories(dir);

    write_jsonl("fixtures/datasets/abductive_small.jsonl", abductive_rows());
    write_jsonl("fixtures/datasets/counterfactual_small.jsonl", counterfactual_rows());
    std::cout << "datasets: 10 + 10 instances\n";

    // Golden prompt sweep: first instance of each dataset, every valid spec.
    auto abductive =
        cp::load_abductive("fixtures/datasets/abductive_small.jsonl", cp::art_mapping());
    auto counterfactual = cp::load_counterfactual("fixtures/datasets/counterfactual_small.jsonl",
                                                  cp::timetravel_mapping());
    std::size_t golden_count = 0;
    for (cp::Task task : {cp::Task::Abductive, cp::Task::Counterfactual}) {
      for (const cp::PromptSpec& spec : cp::enumerate_specs(task, kGoldenSeed)) {
        cp::RenderedPrompt rp = task == cp::Task::Abductive
                                    ? cp::render_prompt(abductive.front(), spec)
                                    : cp::render_prompt(counterfactual.front(), spec);
        write_file(fs::path("fixtures/golden_prompts") / (spec.slug() + ".txt"), rp.text);
        ++golden_count;
      }
    }
    std::cout << "golden prompts: " << golden_count << " files\n";

    for (cp::Task task : {cp::Task::Abductive, cp::Task::Counterfactual}) {
      const bool abductive = task == cp::Task::Abductive;
      for (cp::Style style : {cp::Style::Code, cp::Style::Text}) {
        cp::RunConfig config = golden_config(task, style);
        const bool code = style == cp::Style::Code;
        write_replay_file(config, abductive ? (code ? abductive_outputs()
                                                    : abductive_text_outputs())
                                            : (code ? counterfactual_outputs()
                                                    : counterfactual_text_outputs()));
        fs::remove_all(config.out_dir);  // stale artifacts must not leak into the rerun
        cp::run_pipeline(config);
        std::cout << "golden run: " << config.out_dir.string() << "\n";
      }

      // Per-task results table: the code system and the text baseline as rows,
      // the task's metrics as columns, paired-bootstrap significance against
      // the text baseline.
      std::vector<cp::SystemScores> systems;
      for (cp::Style style : {cp::Style::Code, cp::Style::Text}) {
        fs::path dir = golden_config(task, style).out_dir;
        std::ifstream in(dir / "score_report.json");
        nlohmann::json j;
        in >> j;
        cp::ScoreReport report = cp::report_from_json(j);
        systems.push_back({report.config.at("label").get<std::string>(), std::move(report)});
      }
      std::vector<cp::Comparison> comparisons;
      const cp::SystemScores& code_sys = systems[0];
      const cp::SystemScores& text_sys = systems[1];
      for (const auto& [metric, scores] : code_sys.report.metrics) {
        const cp::MetricScores* other = text_sys.report.find(metric);
        if (!other) continue;
        comparisons.push_back({code_sys.label, text_sys.label, metric,
                               cp::paired_bootstrap(scores.per_instance, other->per_instance)});
        comparisons.push_back({text_sys.label, code_sys.label, metric,
                               cp::paired_bootstrap(other->per_instance, scores.per_instance)});
      }
      cp::ReportTable table = cp::build_report(systems, comparisons, 0.01);
      const char* stem = abductive ? "abductive" : "counterfactual";
      write_file(fs::path("fixtures/golden_run") / (std::string(stem) + "_report.txt"),
                 cp::render_text_table(table));
      nlohmann::ordered_json j = cp::report_table_to_json(table);
      nlohmann::ordered_json comps = nlohmann::ordered_json::array();
      for (const auto& c : comparisons)
        comps.push_back(nlohmann::ordered_json{{"better", c.better},
                                               {"baseline", c.baseline},
                                               {"metric", c.metric},
                                               {"p_value", c.p_value}});
      j["comparisons"] = std::move(comps);
      write_file(fs::path("fixtures/golden_run") / (std::string(stem) + "_report.json"),
                 j.dump(2) + "\n");
      std::cout << "golden report: fixtures/golden_run/" << stem << "_report.{txt,json}\n";
    }

    write_annotation_fixtures();
    std::cout << "annotations: fixtures/annotations/*.jsonl\n";
  } catch (const std::exception& e) {
    std::cerr << "regen_fixtures: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
