#pragma once

// Request digests for caching and replay. The canonical serialization is a
// sequence of length-prefixed segments ("<decimal length>:<bytes>") so that
// no field boundary can be forged by crafted content; floats are rendered
// with %.17g, which round-trips IEEE doubles exactly.

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "causalprompt/error.hpp"

namespace causalprompt {

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int md_len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &md_len, EVP_sha256(), nullptr) != 1)
    fail(Errc::ProviderError, "sha256 digest failed");
  static const char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * md_len);
  for (unsigned int i = 0; i < md_len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

inline std::string format_double_17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void append_segment(std::string& out, std::string_view bytes) {
  out += std::to_string(bytes.size());
  out += ':';
  out.append(bytes.data(), bytes.size());
}

// Canonical byte string for one completion request.
inline std::string canonical_request(std::string_view provider_id, std::string_view model_id,
                                     std::string_view prompt, double temperature, double top_p,
                                     int max_tokens, const std::vector<std::string>& stop) {
  std::string out;
  out.reserve(prompt.size() + 128);
  append_segment(out, provider_id);
  append_segment(out, model_id);
  append_segment(out, prompt);
  append_segment(out, format_double_17(temperature));
  append_segment(out, format_double_17(top_p));
  append_segment(out, std::to_string(max_tokens));
  append_segment(out, std::to_string(stop.size()));
  for (const auto& s : stop) append_segment(out, s);
  return out;
}

}  // namespace causalprompt
