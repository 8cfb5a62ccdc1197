#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "causalprompt/gateway.hpp"

using namespace causalprompt;
namespace fs = std::filesystem;

namespace {

RenderedPrompt make_prompt(std::string text, std::vector<std::string> stops = {"\n"}) {
  RenderedPrompt rp;
  rp.text = std::move(text);
  rp.stop_sequences = std::move(stops);
  rp.extraction.kind = ExtractionKind::CommentLineUntilNewline;
  return rp;
}

RetryPolicy fast_retry() {
  RetryPolicy r;
  r.base_delay_ms = 1;  // keep test wall time negligible
  return r;
}

struct TempPath {
  fs::path path;
  explicit TempPath(const std::string& stem) {
    static int counter = 0;
    path = fs::temp_directory_path() /
           (stem + "_" + std::to_string(++counter) + "_" +
            std::to_string(static_cast<unsigned>(::getpid())));
  }
  ~TempPath() { std::error_code ec; fs::remove(path, ec); }
};

}  // namespace

TEST_CASE("decoding params are validated") {
  CHECK_NOTHROW(validate_params(DecodingParams{}));
  DecodingParams p;
  p.temperature = -0.1;
  CHECK_THROWS_AS(validate_params(p), Error);
  p = DecodingParams{};
  p.top_p = 0.0;
  CHECK_THROWS_AS(validate_params(p), Error);
  p = DecodingParams{};
  p.top_p = 1.5;
  CHECK_THROWS_AS(validate_params(p), Error);
  p = DecodingParams{};
  p.max_tokens = 0;
  CHECK_THROWS_AS(validate_params(p), Error);
  p = DecodingParams{};
  p.stop = {"a", "b", "c", "d", "e"};
  CHECK_THROWS_AS(validate_params(p), Error);
  p.stop = {""};
  CHECK_THROWS_AS(validate_params(p), Error);
}

TEST_CASE("run records round-trip through json") {
  RunRecord r;
  r.instance_id = "i-1";
  r.prompt_digest = std::string(64, 'a');
  r.provider_id = "scripted";
  r.model_id = "m";
  r.params.temperature = 0.5;
  r.params.stop = {"\n", "# end"};
  r.completion = "some text\n";
  r.finish_reason = "stop";
  r.created_at = "2026-01-05T12:00:00Z";
  r.attempts = 3;
  CHECK(record_from_json(record_to_json(r)) == r);
}

TEST_CASE("truncation keeps the terminator and picks the earliest stop") {
  std::string reason;
  CHECK(Gateway::truncate_at_stop(" hypothesis text\ndef next():", {"\n"}, reason) ==
        " hypothesis text\n");
  CHECK(reason == "stop");

  reason.clear();
  CHECK(Gateway::truncate_at_stop(" a\")rest\";more", {"\";", "\")"}, reason) == " a\")");

  reason.clear();
  CHECK(Gateway::truncate_at_stop("no marker here", {"\n"}, reason) == "no marker here");
  CHECK(reason.empty());

  reason.clear();
  CHECK(Gateway::truncate_at_stop(" body.\n    # end\nextra", {"# end"}, reason) ==
        " body.\n    # end");
}

TEST_CASE("gateway resolves stops from the prompt when params leave them empty") {
  auto provider = std::make_shared<ScriptedProvider>(
      std::vector<ScriptedProvider::Step>{{false, " answer\nnoise", "length"}});
  Gateway gw(provider, "m", fast_retry());
  RunRecord rec = gw.complete(make_prompt("p"), DecodingParams{}, "i-1");
  CHECK(rec.completion == " answer\n");
  CHECK(rec.finish_reason == "stop");
  CHECK(rec.params.stop == std::vector<std::string>{"\n"});
  CHECK(rec.instance_id == "i-1");
  CHECK(rec.provider_id == "scripted");
  CHECK(rec.attempts == 1);
}

TEST_CASE("transient failures are retried and counted") {
  auto provider = std::make_shared<ScriptedProvider>(std::vector<ScriptedProvider::Step>{
      {true, "", ""}, {true, "", ""}, {false, " ok\n", "stop"}});
  Gateway gw(provider, "m", fast_retry());
  RunRecord rec = gw.complete(make_prompt("p"), DecodingParams{}, "i-1");
  CHECK(rec.completion == " ok\n");
  CHECK(rec.attempts == 3);
  CHECK(provider->calls() == 3);
}

TEST_CASE("retries give up after max_attempts") {
  auto provider = std::make_shared<ScriptedProvider>(std::vector<ScriptedProvider::Step>(
      5, ScriptedProvider::Step{true, "", ""}));
  Gateway gw(provider, "m", fast_retry());
  try {
    gw.complete(make_prompt("p"), DecodingParams{}, "i-1");
    FAIL("expected ProviderError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ProviderError);
    CHECK(exit_code_for(e.code()) == 2);
    CHECK(std::string(e.what()).find("5 attempts") != std::string::npos);
  }
  CHECK(provider->calls() == 5);
}

TEST_CASE("identical requests hit the in-memory cache") {
  auto provider = std::make_shared<ScriptedProvider>(
      std::vector<ScriptedProvider::Step>{{false, " once\n", "stop"}});
  Gateway gw(provider, "m", fast_retry());
  RunRecord first = gw.complete(make_prompt("same"), DecodingParams{}, "i-1");
  RunRecord second = gw.complete(make_prompt("same"), DecodingParams{}, "i-2");
  CHECK(provider->calls() == 1);
  CHECK(second.completion == first.completion);
  CHECK(second.prompt_digest == first.prompt_digest);
  // the cached record is re-labeled for the caller
  CHECK(second.instance_id == "i-2");
}

TEST_CASE("different params miss the cache") {
  auto provider = std::make_shared<ScriptedProvider>(std::vector<ScriptedProvider::Step>{
      {false, " a\n", "stop"}, {false, " b\n", "stop"}});
  Gateway gw(provider, "m", fast_retry());
  DecodingParams p;
  gw.complete(make_prompt("same"), p, "i-1");
  p.max_tokens = 99;
  gw.complete(make_prompt("same"), p, "i-1");
  CHECK(provider->calls() == 2);
}

TEST_CASE("cache file enables resume without new provider calls") {
  TempPath cache("causalprompt_cache");
  {
    auto provider = std::make_shared<ScriptedProvider>(
        std::vector<ScriptedProvider::Step>{{false, " first\n", "stop"}});
    Gateway gw(provider, "m", fast_retry());
    gw.set_cache_file(cache.path);
    gw.complete(make_prompt("p"), DecodingParams{}, "i-1");
  }
  // fresh gateway, provider would fail if called
  auto provider = std::make_shared<ScriptedProvider>(std::vector<ScriptedProvider::Step>{},
                                                     "scripted");
  Gateway gw(provider, "m", fast_retry());
  gw.preload_cache(read_run_records(cache.path));
  RunRecord rec = gw.complete(make_prompt("p"), DecodingParams{}, "i-1");
  CHECK(rec.completion == " first\n");
  CHECK(provider->calls() == 0);
}

TEST_CASE("replay provider impersonates the recorded provider id") {
  TempPath records("causalprompt_records");
  RenderedPrompt rp = make_prompt("the prompt");
  {
    auto provider = std::make_shared<ScriptedProvider>(
        std::vector<ScriptedProvider::Step>{{false, " recorded\n", "stop"}}, "live");
    Gateway gw(provider, "model-x", fast_retry());
    std::vector<RunRecord> out{gw.complete(rp, DecodingParams{}, "i-1")};
    write_run_records(records.path, out);
  }
  auto replay = std::make_shared<ReplayProvider>(records.path);
  CHECK(replay->id() == "live");
  Gateway gw(replay, "model-x", fast_retry());
  RunRecord rec = gw.complete(rp, DecodingParams{}, "i-1");
  CHECK(rec.completion == " recorded\n");
  CHECK(rec.provider_id == "live");

  // an unrecorded prompt must fail loudly, never fall through
  try {
    gw.complete(make_prompt("unseen prompt"), DecodingParams{}, "i-2");
    FAIL("expected ReplayMiss");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ReplayMiss);
    CHECK(exit_code_for(e.code()) == 2);
  }
}

TEST_CASE("replayed completions keep their recorded timestamps") {
  TempPath records("causalprompt_records");
  RunRecord canned;
  canned.instance_id = "i-1";
  canned.provider_id = "live";
  canned.model_id = "m";
  canned.params.stop = {"\n"};
  canned.completion = " text\n";
  canned.finish_reason = "stop";
  canned.created_at = "2025-11-30T08:00:00Z";
  canned.attempts = 2;
  canned.prompt_digest = cache_key("live", "m", "p", canned.params);
  write_run_records(records.path, {canned});

  Gateway gw(std::make_shared<ReplayProvider>(records.path), "m", fast_retry());
  RunRecord rec = gw.complete(make_prompt("p"), DecodingParams{}, "i-1");
  CHECK(rec.created_at == "2025-11-30T08:00:00Z");
  CHECK(rec.attempts == 2);
}

TEST_CASE("replay files must be uniform in provider id") {
  TempPath records("causalprompt_records");
  RunRecord a;
  a.instance_id = "1";
  a.provider_id = "live";
  a.model_id = "m";
  a.prompt_digest = std::string(64, '1');
  a.completion = "x";
  a.finish_reason = "stop";
  a.created_at = "2025-01-01T00:00:00Z";
  RunRecord b = a;
  b.provider_id = "other";
  b.prompt_digest = std::string(64, '2');
  write_run_records(records.path, {a, b});
  CHECK_THROWS_AS(ReplayProvider(records.path), Error);
}

TEST_CASE("timestamps are ISO-8601 UTC") {
  std::string ts = Gateway::now_utc_iso8601();
  REQUIRE(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts[7] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts[13] == ':');
  CHECK(ts[16] == ':');
  CHECK(ts[19] == 'Z');
}
