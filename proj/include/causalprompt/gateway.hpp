#pragma once

// Completion service access: a provider interface (live HTTP or offline
// replay), a caching + retrying gateway in front of it, and the RunRecord
// bookkeeping that makes every run replayable. Requests are keyed by a
// SHA-256 digest of their canonical serialization (see digest.hpp).

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalprompt/digest.hpp"
#include "causalprompt/error.hpp"
#include "causalprompt/random.hpp"
#include "causalprompt/render.hpp"

namespace causalprompt {

struct DecodingParams {
  double temperature = 0.0;
  double top_p = 1.0;
  int max_tokens = 64;
  std::vector<std::string> stop;  // empty: take the rendered prompt's stops

  bool operator==(const DecodingParams&) const = default;
};

inline void validate_params(const DecodingParams& p) {
  if (p.temperature < 0.0) fail(Errc::ConfigError, "temperature must be >= 0");
  if (p.top_p <= 0.0 || p.top_p > 1.0) fail(Errc::ConfigError, "top_p must be in (0, 1]");
  if (p.max_tokens < 1) fail(Errc::ConfigError, "max_tokens must be >= 1");
  if (p.stop.size() > 4) fail(Errc::ConfigError, "at most 4 stop sequences are supported");
  for (const auto& s : p.stop)
    if (s.empty()) fail(Errc::ConfigError, "stop sequences must be non-empty");
}

struct RunRecord {
  std::string instance_id;
  std::string prompt_digest;  // 64 hex chars
  std::string provider_id;
  std::string model_id;
  DecodingParams params;
  std::string completion;      // raw text, already cut at the first stop
  std::string finish_reason;   // "stop", "length" or provider-reported
  std::string created_at;      // ISO-8601 UTC
  int attempts = 1;

  bool operator==(const RunRecord&) const = default;
};

inline nlohmann::ordered_json record_to_json(const RunRecord& r) {
  return nlohmann::ordered_json{
      {"instance_id", r.instance_id},
      {"prompt_digest", r.prompt_digest},
      {"provider_id", r.provider_id},
      {"model_id", r.model_id},
      {"params",
       {{"temperature", r.params.temperature},
        {"top_p", r.params.top_p},
        {"max_tokens", r.params.max_tokens},
        {"stop", r.params.stop}}},
      {"completion", r.completion},
      {"finish_reason", r.finish_reason},
      {"created_at", r.created_at},
      {"attempts", r.attempts},
  };
}

inline RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  try {
    r.instance_id = j.at("instance_id").get<std::string>();
    r.prompt_digest = j.at("prompt_digest").get<std::string>();
    r.provider_id = j.at("provider_id").get<std::string>();
    r.model_id = j.at("model_id").get<std::string>();
    const auto& p = j.at("params");
    r.params.temperature = p.at("temperature").get<double>();
    r.params.top_p = p.at("top_p").get<double>();
    r.params.max_tokens = p.at("max_tokens").get<int>();
    r.params.stop = p.at("stop").get<std::vector<std::string>>();
    r.completion = j.at("completion").get<std::string>();
    r.finish_reason = j.at("finish_reason").get<std::string>();
    r.created_at = j.at("created_at").get<std::string>();
    r.attempts = j.at("attempts").get<int>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("bad run record: ") + e.what());
  }
  return r;
}

inline std::vector<RunRecord> read_run_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open record file: " + path.string());
  std::vector<RunRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_view(line).empty()) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      fail(Errc::ParseError, path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

inline void write_run_records(const std::filesystem::path& path,
                              const std::vector<RunRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::ConfigError, "cannot write record file: " + path.string());
  for (const auto& r : records) out << record_to_json(r).dump() << "\n";
}

// ---- providers ---------------------------------------------------------------

struct CompletionRequest {
  std::string model_id;
  std::string prompt;
  DecodingParams params;  // stop already resolved
  std::string digest;     // cache key, precomputed by the gateway
};

struct CompletionReply {
  std::string text;
  std::string finish_reason;
  std::optional<std::string> created_at;  // replay keeps the recorded clock
  std::optional<int> attempts;
};

// Retryable failure (rate limit, 5xx, connection trouble). Anything else is
// raised as a plain Error and aborts the request immediately.
class TransientProviderError : public Error {
 public:
  explicit TransientProviderError(const std::string& message)
      : Error(Errc::ProviderError, message) {}
};

class CompletionProvider {
 public:
  virtual ~CompletionProvider() = default;
  virtual std::string id() const = 0;
  virtual CompletionReply complete_once(const CompletionRequest& request) = 0;
};

// Offline provider backed by a RunRecord file; impersonates the provider id
// the records were made with so digests keep matching. Unknown digests are a
// hard error: a replay run must never silently fall through to a network.
class ReplayProvider : public CompletionProvider {
 public:
  explicit ReplayProvider(const std::filesystem::path& record_file) : source_(record_file.string()) {
    std::vector<RunRecord> records = read_run_records(record_file);
    if (records.empty()) fail(Errc::ReplayMiss, "replay file has no records: " + source_);
    provider_id_ = records.front().provider_id;
    for (auto& r : records) {
      if (r.provider_id != provider_id_)
        fail(Errc::ParseError, "replay file mixes provider ids: " + source_);
      by_digest_.emplace(r.prompt_digest, std::move(r));
    }
  }

  std::string id() const override { return provider_id_; }

  CompletionReply complete_once(const CompletionRequest& request) override {
    auto it = by_digest_.find(request.digest);
    if (it == by_digest_.end())
      fail(Errc::ReplayMiss, "no recorded completion for digest " + request.digest.substr(0, 12) +
                                 "... in " + source_);
    const RunRecord& r = it->second;
    return CompletionReply{r.completion, r.finish_reason, r.created_at, r.attempts};
  }

 private:
  std::string source_;
  std::string provider_id_;
  std::unordered_map<std::string, RunRecord> by_digest_;
};

// Scripted in-memory provider for tests: pops replies (or failures) in order.
class ScriptedProvider : public CompletionProvider {
 public:
  struct Step {
    bool transient_failure = false;
    std::string text;
    std::string finish_reason = "stop";
  };

  explicit ScriptedProvider(std::vector<Step> steps, std::string id = "scripted")
      : steps_(std::move(steps)), id_(std::move(id)) {}

  std::string id() const override { return id_; }

  int calls() const { return calls_; }

  CompletionReply complete_once(const CompletionRequest&) override {
    if (static_cast<std::size_t>(calls_) >= steps_.size())
      fail(Errc::ProviderError, "scripted provider exhausted");
    const Step& s = steps_[static_cast<std::size_t>(calls_++)];
    if (s.transient_failure) throw TransientProviderError("scripted transient failure");
    return CompletionReply{s.text, s.finish_reason, std::nullopt, std::nullopt};
  }

 private:
  std::vector<Step> steps_;
  std::string id_;
  int calls_ = 0;
};

// ---- gateway -----------------------------------------------------------------

struct RetryPolicy {
  int max_attempts = 5;
  int base_delay_ms = 1000;
  double factor = 2.0;
  double jitter = 0.2;  // +-20% multiplicative
};

class Gateway {
 public:
  Gateway(std::shared_ptr<CompletionProvider> provider, std::string model_id,
          RetryPolicy retry = {})
      : provider_(std::move(provider)),
        model_id_(std::move(model_id)),
        retry_(retry),
        jitter_rng_(std::random_device{}()) {}

  // Warm the cache from a previous run's records (resume support). Records
  // from other providers/models simply never match a digest.
  void preload_cache(const std::vector<RunRecord>& records) {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& r : records) cache_.emplace(r.prompt_digest, r);
  }

  // Every fresh completion is appended here as soon as it succeeds, so an
  // interrupted run can resume without repeating paid requests.
  void set_cache_file(const std::filesystem::path& path) { cache_file_ = path; }

  std::shared_ptr<CompletionProvider> provider() const { return provider_; }
  const std::string& model_id() const { return model_id_; }

  RunRecord complete(const RenderedPrompt& prompt, const DecodingParams& params,
                     const std::string& instance_id) {
    DecodingParams resolved = params;
    if (resolved.stop.empty()) resolved.stop = prompt.stop_sequences;
    validate_params(resolved);

    CompletionRequest req;
    req.model_id = model_id_;
    req.prompt = prompt.text;
    req.params = resolved;
    req.digest = sha256_hex(canonical_request(provider_->id(), model_id_, prompt.text,
                                              resolved.temperature, resolved.top_p,
                                              resolved.max_tokens, resolved.stop));
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(req.digest);
      if (it != cache_.end()) {
        RunRecord hit = it->second;
        hit.instance_id = instance_id;
        return hit;
      }
    }

    CompletionReply reply;
    int attempt = 1;
    for (;; ++attempt) {
      try {
        reply = provider_->complete_once(req);
        break;
      } catch (const TransientProviderError& e) {
        if (attempt >= retry_.max_attempts)
          fail(Errc::ProviderError, std::string("giving up after ") + std::to_string(attempt) +
                                        " attempts: " + e.what());
        std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms(attempt)));
      }
    }

    RunRecord record;
    record.instance_id = instance_id;
    record.prompt_digest = req.digest;
    record.provider_id = provider_->id();
    record.model_id = model_id_;
    record.params = resolved;
    record.completion = truncate_at_stop(reply.text, resolved.stop, record.finish_reason);
    if (record.finish_reason.empty())
      record.finish_reason = reply.finish_reason.empty() ? "stop" : reply.finish_reason;
    record.created_at = reply.created_at ? *reply.created_at : now_utc_iso8601();
    record.attempts = reply.attempts ? *reply.attempts : attempt;

    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(record.prompt_digest, record);
    if (cache_file_) {
      std::ofstream out(*cache_file_, std::ios::app);
      if (out) out << record_to_json(record).dump() << "\n";
    }
    return record;
  }

  // Cut at the end of the first stop occurrence. The terminator is kept on
  // purpose: extraction uses it (end markers, closing quotes), and cutting it
  // away would make replayed and live completions parse differently.
  static std::string truncate_at_stop(const std::string& text,
                                      const std::vector<std::string>& stops,
                                      std::string& finish_reason) {
    std::size_t best = std::string::npos;
    std::size_t best_len = 0;
    for (const auto& s : stops) {
      if (s.empty()) continue;
      std::size_t pos = text.find(s);
      if (pos != std::string::npos && (best == std::string::npos || pos < best)) {
        best = pos;
        best_len = s.size();
      }
    }
    if (best == std::string::npos) return text;
    finish_reason = "stop";
    return text.substr(0, best + best_len);
  }

  static std::string now_utc_iso8601() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

 private:
  // Exponential backoff with multiplicative jitter; attempt counts from 1.
  int backoff_ms(int attempt) {
    double delay = retry_.base_delay_ms;
    for (int i = 1; i < attempt; ++i) delay *= retry_.factor;
    double lo = 1.0 - retry_.jitter;
    double hi = 1.0 + retry_.jitter;
    std::lock_guard<std::mutex> lock(jitter_mu_);
    double scale = lo + (hi - lo) * uniform_unit(jitter_rng_);
    return static_cast<int>(delay * scale);
  }

  std::shared_ptr<CompletionProvider> provider_;
  std::string model_id_;
  RetryPolicy retry_;
  std::mutex mu_;
  std::unordered_map<std::string, RunRecord> cache_;
  std::optional<std::filesystem::path> cache_file_;
  std::mutex jitter_mu_;
  std::mt19937_64 jitter_rng_;
};

inline std::string cache_key(std::string_view provider_id, std::string_view model_id,
                             std::string_view prompt, const DecodingParams& params) {
  return sha256_hex(canonical_request(provider_id, model_id, prompt, params.temperature,
                                      params.top_p, params.max_tokens, params.stop));
}

}  // namespace causalprompt
