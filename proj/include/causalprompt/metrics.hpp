#pragma once

// Text-overlap metrics, all self-contained: corpus BLEU-4, ROUGE-L, CIDEr-D,
// a word-level edit-similarity score, and a greedy embedding-matching score
// behind a pluggable embedder interface. Every public score is on a 0-100
// display scale; CIDEr additionally reports its raw 0-10 corpus value.
//
// Conventions worth calling out:
//   * BLEU n-gram orders whose candidate denominator is zero over the whole
//     corpus (every candidate shorter than n) count as precision 1, so
//     identity corpora of very short texts still score 100.
//   * CIDEr follows the consensus-based variant with per-reference clipped
//     tf-idf cosines and a Gaussian length penalty (sigma defaults to 6);
//     document frequencies come from reference sets only.
//   * Cosines of bitwise-identical count/embedding vectors short-circuit to
//     1.0 so identity inputs are exact, not within-an-ulp.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalprompt/error.hpp"
#include "causalprompt/text.hpp"

namespace causalprompt {

using Tokens = std::vector<std::string>;

inline constexpr const char* kTokenizerId = "ws_lower_punct_v1";

inline bool is_token_punct(char c) {
  switch (c) {
    case '.': case ',': case '!': case '?': case ';': case ':':
    case '\'': case '"': case '(': case ')':
      return true;
    default:
      return false;
  }
}

// Lowercased whitespace tokenization with the sentence punctuation marks
// split off as their own tokens.
inline Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string cur;
  auto flush = [&out, &cur] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  for (char c : text) {
    if (is_space_byte(c)) {
      flush();
    } else if (is_token_punct(c)) {
      flush();
      out.emplace_back(1, c);
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  flush();
  return out;
}

namespace detail {

// N-grams are keyed by their tokens joined with a separator byte that cannot
// appear inside a token (tokenize never emits control characters as-is; even
// if one slipped through, the joint key is still injective enough for counts
// over real text).
inline std::string ngram_key(const Tokens& t, std::size_t pos, std::size_t n) {
  std::string key;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) key.push_back('\x1f');
    key += t[pos + i];
  }
  return key;
}

inline std::unordered_map<std::string, long> ngram_counts(const Tokens& t, std::size_t n) {
  std::unordered_map<std::string, long> counts;
  if (t.size() >= n)
    for (std::size_t i = 0; i + n <= t.size(); ++i) ++counts[ngram_key(t, i, n)];
  return counts;
}

inline void check_corpus(const std::vector<Tokens>& cands,
                         const std::vector<std::vector<Tokens>>& refs) {
  if (cands.size() != refs.size())
    fail(Errc::LengthMismatch, std::to_string(cands.size()) + " candidates vs " +
                                   std::to_string(refs.size()) + " reference sets");
  if (cands.empty()) fail(Errc::EmptyCorpus, "no instances to score");
  for (std::size_t i = 0; i < refs.size(); ++i)
    if (refs[i].empty())
      fail(Errc::EmptyCorpus, "instance " + std::to_string(i) + " has no references");
}

}  // namespace detail

// ---- BLEU-4 ------------------------------------------------------------------

// Corpus BLEU-4: clipped n-gram counts pooled over instances, geometric mean
// of the four precisions, brevity penalty from closest-reference lengths
// (ties resolved toward the shorter reference).
inline double bleu4(const std::vector<Tokens>& cands,
                    const std::vector<std::vector<Tokens>>& refs) {
  detail::check_corpus(cands, refs);
  double num[4] = {0, 0, 0, 0};
  double den[4] = {0, 0, 0, 0};
  std::size_t cand_total = 0;
  std::size_t ref_total = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const Tokens& c = cands[i];
    cand_total += c.size();
    std::size_t closest = refs[i][0].size();
    for (const Tokens& r : refs[i]) {
      auto dist = [&c](std::size_t len) {
        return len > c.size() ? len - c.size() : c.size() - len;
      };
      if (dist(r.size()) < dist(closest) || (dist(r.size()) == dist(closest) && r.size() < closest))
        closest = r.size();
    }
    ref_total += closest;
    for (std::size_t n = 1; n <= 4; ++n) {
      auto cc = detail::ngram_counts(c, n);
      std::unordered_map<std::string, long> rmax;
      for (const Tokens& r : refs[i])
        for (const auto& [k, v] : detail::ngram_counts(r, n)) {
          long& slot = rmax[k];
          if (v > slot) slot = v;
        }
      for (const auto& [k, v] : cc) {
        auto it = rmax.find(k);
        long clip = it == rmax.end() ? 0 : std::min(v, it->second);
        num[n - 1] += static_cast<double>(clip);
      }
      if (c.size() >= n) den[n - 1] += static_cast<double>(c.size() - n + 1);
    }
  }
  double log_sum = 0.0;
  for (int n = 0; n < 4; ++n) {
    if (den[n] == 0.0) continue;  // vacuous order: precision 1, log 0
    if (num[n] == 0.0) return 0.0;
    log_sum += std::log(num[n] / den[n]);
  }
  double brevity = 1.0;
  if (cand_total < ref_total)
    brevity = cand_total == 0
                  ? 0.0
                  : std::exp(1.0 - static_cast<double>(ref_total) / static_cast<double>(cand_total));
  return 100.0 * brevity * std::exp(log_sum / 4.0);
}

// Sentence-level BLEU-4 of one instance (used for per-instance vectors that
// feed significance testing; unsmoothed, same conventions as the corpus
// score restricted to a single instance).
inline double bleu4_single(const Tokens& cand, const std::vector<Tokens>& refs) {
  return bleu4(std::vector<Tokens>{cand}, std::vector<std::vector<Tokens>>{refs});
}

// ---- ROUGE-L -----------------------------------------------------------------

inline std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// LCS F1 against the best reference, on 0-100.
inline double rouge_l_single(const Tokens& cand, const std::vector<Tokens>& refs) {
  if (refs.empty()) fail(Errc::EmptyCorpus, "rouge_l needs at least one reference");
  double best = 0.0;
  for (const Tokens& r : refs) {
    double lcs = static_cast<double>(lcs_length(cand, r));
    double p = cand.empty() ? 0.0 : lcs / static_cast<double>(cand.size());
    double rec = r.empty() ? 0.0 : lcs / static_cast<double>(r.size());
    double f = p + rec == 0.0 ? 0.0 : 2.0 * p * rec / (p + rec);
    if (f > best) best = f;
  }
  return 100.0 * best;
}

inline std::vector<double> rouge_l_per_instance(const std::vector<Tokens>& cands,
                                                const std::vector<std::vector<Tokens>>& refs) {
  detail::check_corpus(cands, refs);
  std::vector<double> out;
  out.reserve(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i)
    out.push_back(rouge_l_single(cands[i], refs[i]));
  return out;
}

// ---- CIDEr-D -----------------------------------------------------------------

struct CiderScores {
  std::vector<double> per_instance;  // raw values in [0, 10]
  double corpus = 0.0;               // mean of per_instance, still [0, 10]
  bool degenerate = false;           // every reference n-gram occurs in every instance
};

inline CiderScores cider(const std::vector<Tokens>& cands,
                         const std::vector<std::vector<Tokens>>& refs, double sigma = 6.0) {
  detail::check_corpus(cands, refs);
  const std::size_t N = cands.size();
  if (N < 2) fail(Errc::EmptyCorpus, "cider needs at least 2 instances for document frequencies");

  // Document frequency of each n-gram over reference sets.
  std::unordered_map<std::string, long> df[4];
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t n = 1; n <= 4; ++n) {
      std::unordered_map<std::string, long> seen;
      for (const Tokens& r : refs[i])
        for (const auto& [k, v] : detail::ngram_counts(r, n)) seen.emplace(k, 1);
      for (const auto& [k, v] : seen) ++df[n - 1][k];
    }
  }
  bool degenerate = true;
  bool any = false;
  for (const auto& m : df) {
    for (const auto& [k, d] : m) {
      any = true;
      if (static_cast<std::size_t>(d) != N) degenerate = false;
    }
  }
  degenerate = degenerate && any;

  const double log_n = std::log(static_cast<double>(N));
  auto idf = [&df, log_n](std::size_t n, const std::string& key) {
    auto it = df[n - 1].find(key);
    long d = it == df[n - 1].end() ? 0 : it->second;
    return log_n - std::log(static_cast<double>(std::max<long>(1, d)));
  };

  CiderScores out;
  out.degenerate = degenerate;
  out.per_instance.reserve(N);
  double total = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const Tokens& c = cands[i];
    double ref_sum = 0.0;
    for (const Tokens& r : refs[i]) {
      double delta = static_cast<double>(c.size()) - static_cast<double>(r.size());
      double penalty = std::exp(-(delta * delta) / (2.0 * sigma * sigma));
      double order_sum = 0.0;
      for (std::size_t n = 1; n <= 4; ++n) {
        auto hc = detail::ngram_counts(c, n);
        auto rc = detail::ngram_counts(r, n);
        bool identical_nonzero = false;
        if (!hc.empty() && hc == rc)
          for (const auto& [k, v] : hc)
            if (idf(n, k) > 0.0) {
              identical_nonzero = true;
              break;
            }
        double sim;
        if (identical_nonzero) {
          sim = 1.0;  // identical nonzero vectors: cosine is exactly 1
        } else {
          double dot = 0.0;
          double norm_h = 0.0;
          double norm_r = 0.0;
          for (const auto& [k, v] : hc) {
            double w = static_cast<double>(v) * idf(n, k);
            norm_h += w * w;
            auto it = rc.find(k);
            if (it != rc.end()) {
              double rw = static_cast<double>(it->second) * idf(n, k);
              dot += std::min(w, rw) * rw;  // clipped, consensus variant
            }
          }
          for (const auto& [k, v] : rc) {
            double rw = static_cast<double>(v) * idf(n, k);
            norm_r += rw * rw;
          }
          sim = norm_h > 0.0 && norm_r > 0.0 ? dot / (std::sqrt(norm_h) * std::sqrt(norm_r)) : 0.0;
        }
        order_sum += sim * penalty;
      }
      ref_sum += order_sum / 4.0;
    }
    double score = 10.0 * ref_sum / static_cast<double>(refs[i].size());
    out.per_instance.push_back(score);
    total += score;
  }
  out.corpus = total / static_cast<double>(N);
  return out;
}

// ---- word-level edit similarity (counterfactual rewrites) ---------------------

inline std::size_t word_levenshtein(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// 100 * (1 - distance / max length): how little the candidate rewrote the
// original ending. Two empty inputs count as identical.
inline double min_edit(const Tokens& cand, const Tokens& original) {
  std::size_t longest = std::max(cand.size(), original.size());
  if (longest == 0) return 100.0;
  double d = static_cast<double>(word_levenshtein(cand, original));
  return 100.0 * (1.0 - d / static_cast<double>(longest));
}

// ---- embedding-matching score --------------------------------------------------

class TokenEmbedder {
 public:
  virtual ~TokenEmbedder() = default;
  virtual std::string id() const = 0;
  // One vector per token; all vectors of one call have equal dimension.
  virtual std::vector<std::vector<double>> embed(const Tokens& tokens) = 0;
};

// Deterministic stand-in embedder: each token's vector is drawn from an
// mt19937_64 seeded with the token's FNV-1a hash. Carries no semantics; equal
// tokens get equal vectors, which is all the tests need.
class HashedStubEmbedder : public TokenEmbedder {
 public:
  explicit HashedStubEmbedder(std::size_t dim = 16) : dim_(dim) {}

  std::string id() const override { return "hash-stub-v1"; }

  std::vector<std::vector<double>> embed(const Tokens& tokens) override {
    std::vector<std::vector<double>> out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens) {
      std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
      for (unsigned char c : tok) {
        h ^= c;
        h *= 1099511628211ull;
      }
      std::mt19937_64 rng(h);
      std::vector<double> v(dim_);
      for (auto& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;  // [-1, 1)
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  std::size_t dim_;
};

namespace detail {

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a == b) return a.empty() ? 0.0 : 1.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace detail

// Greedy token-matching F1 (recall: each reference token takes its best
// candidate match; precision: vice versa), best reference wins; 0-100.
inline double embed_score_single(const Tokens& cand, const std::vector<Tokens>& refs,
                                 TokenEmbedder& embedder) {
  if (refs.empty()) fail(Errc::EmptyCorpus, "embed_score needs at least one reference");
  auto cand_vecs = embedder.embed(cand);
  double best = 0.0;
  for (const Tokens& r : refs) {
    if (cand.empty() || r.empty()) continue;  // scores 0 against this reference
    auto ref_vecs = embedder.embed(r);
    double recall = 0.0;
    for (const auto& rv : ref_vecs) {
      double m = 0.0;
      for (const auto& cv : cand_vecs) m = std::max(m, detail::cosine(cv, rv));
      recall += m;
    }
    recall /= static_cast<double>(ref_vecs.size());
    double precision = 0.0;
    for (const auto& cv : cand_vecs) {
      double m = 0.0;
      for (const auto& rv : ref_vecs) m = std::max(m, detail::cosine(cv, rv));
      precision += m;
    }
    precision /= static_cast<double>(cand_vecs.size());
    double f = precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
    if (f > best) best = f;
  }
  return 100.0 * best;
}

inline std::vector<double> embed_score_per_instance(const std::vector<Tokens>& cands,
                                                    const std::vector<std::vector<Tokens>>& refs,
                                                    TokenEmbedder& embedder) {
  detail::check_corpus(cands, refs);
  std::vector<double> out;
  out.reserve(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i)
    out.push_back(embed_score_single(cands[i], refs[i], embedder));
  return out;
}

// ---- score report ---------------------------------------------------------------

struct MetricScores {
  double corpus = 0.0;                 // display scale, 0-100
  std::vector<double> per_instance;    // display scale, aligned with instance_ids
  std::optional<double> raw_corpus;    // cider only: raw 0-10 value
  bool degenerate = false;             // cider only
};

struct ScoreReport {
  std::string task;  // "abductive" or "counterfactual"
  std::string tokenizer = kTokenizerId;
  std::vector<std::string> instance_ids;
  std::vector<std::pair<std::string, MetricScores>> metrics;  // insertion order preserved
  nlohmann::ordered_json config;  // provenance: spec, params, provider (pipeline fills this)

  const MetricScores* find(std::string_view name) const {
    for (const auto& [n, m] : metrics)
      if (n == name) return &m;
    return nullptr;
  }
};

inline nlohmann::ordered_json report_to_json(const ScoreReport& r) {
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [name, m] : r.metrics) {
    nlohmann::ordered_json jm{{"corpus", m.corpus}, {"per_instance", m.per_instance}};
    if (m.raw_corpus) jm["raw_corpus"] = *m.raw_corpus;
    if (m.degenerate) jm["degenerate"] = true;
    metrics[name] = std::move(jm);
  }
  return nlohmann::ordered_json{{"task", r.task},
                                {"tokenizer", r.tokenizer},
                                {"instance_ids", r.instance_ids},
                                {"metrics", std::move(metrics)},
                                {"config", r.config}};
}

inline ScoreReport report_from_json(const nlohmann::json& j) {
  ScoreReport r;
  try {
    r.task = j.at("task").get<std::string>();
    r.tokenizer = j.at("tokenizer").get<std::string>();
    r.instance_ids = j.at("instance_ids").get<std::vector<std::string>>();
    for (const auto& [name, jm] : j.at("metrics").items()) {
      MetricScores m;
      m.corpus = jm.at("corpus").get<double>();
      m.per_instance = jm.at("per_instance").get<std::vector<double>>();
      if (jm.contains("raw_corpus")) m.raw_corpus = jm.at("raw_corpus").get<double>();
      if (jm.contains("degenerate")) m.degenerate = jm.at("degenerate").get<bool>();
      r.metrics.emplace_back(name, std::move(m));
    }
    r.config = j.value("config", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("bad score report: ") + e.what());
  }
  return r;
}

// Computes the named metrics over already-extracted candidate texts.
// originals (the unedited endings) are only consulted by min_edit.
inline ScoreReport compute_scores(const std::string& task,
                                  const std::vector<std::string>& instance_ids,
                                  const std::vector<std::string>& candidates,
                                  const std::vector<std::vector<std::string>>& references,
                                  const std::vector<std::string>& originals,
                                  const std::vector<std::string>& metric_names,
                                  TokenEmbedder* embedder) {
  if (instance_ids.size() != candidates.size() || candidates.size() != references.size())
    fail(Errc::LengthMismatch, "ids, candidates and references must align");
  ScoreReport report;
  report.task = task;
  report.instance_ids = instance_ids;

  std::vector<Tokens> cand_toks;
  cand_toks.reserve(candidates.size());
  for (const auto& c : candidates) cand_toks.push_back(tokenize(c));
  std::vector<std::vector<Tokens>> ref_toks(references.size());
  for (std::size_t i = 0; i < references.size(); ++i)
    for (const auto& r : references[i]) ref_toks[i].push_back(tokenize(r));

  for (const auto& name : metric_names) {
    MetricScores m;
    if (name == "bleu4" || name == "bleu4_sentence_mean") {
      for (std::size_t i = 0; i < cand_toks.size(); ++i)
        m.per_instance.push_back(bleu4_single(cand_toks[i], ref_toks[i]));
      if (name == "bleu4") {
        m.corpus = bleu4(cand_toks, ref_toks);
      } else {
        double sum = 0.0;
        for (double v : m.per_instance) sum += v;
        m.corpus = sum / static_cast<double>(m.per_instance.size());
      }
    } else if (name == "rouge_l") {
      m.per_instance = rouge_l_per_instance(cand_toks, ref_toks);
      double sum = 0.0;
      for (double v : m.per_instance) sum += v;
      m.corpus = sum / static_cast<double>(m.per_instance.size());
    } else if (name == "cider") {
      CiderScores s = cider(cand_toks, ref_toks);
      m.raw_corpus = s.corpus;
      m.degenerate = s.degenerate;
      m.corpus = 10.0 * s.corpus;  // display on 0-100 like the other metrics
      for (double v : s.per_instance) m.per_instance.push_back(10.0 * v);
    } else if (name == "bertscore") {
      if (!embedder) continue;  // embedder unavailable: metric reported as absent
      m.per_instance = embed_score_per_instance(cand_toks, ref_toks, *embedder);
      double sum = 0.0;
      for (double v : m.per_instance) sum += v;
      m.corpus = sum / static_cast<double>(m.per_instance.size());
    } else if (name == "min_edit") {
      if (originals.size() != candidates.size())
        fail(Errc::LengthMismatch, "min_edit needs one original text per candidate");
      double sum = 0.0;
      for (std::size_t i = 0; i < cand_toks.size(); ++i) {
        double v = min_edit(cand_toks[i], tokenize(originals[i]));
        m.per_instance.push_back(v);
        sum += v;
      }
      m.corpus = sum / static_cast<double>(m.per_instance.size());
    } else {
      fail(Errc::ConfigError, "unknown metric: " + name);
    }
    report.metrics.emplace_back(name, std::move(m));
  }
  return report;
}

}  // namespace causalprompt
