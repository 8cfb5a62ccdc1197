#pragma once

// Minimal structural well-formedness checks for completed prompts. These are
// not parsers for the real languages: they verify the two properties the
// renderer guarantees and tests rely on — balanced delimiters outside string
// literals and comments, plus consistent indentation (Python) or
// statement/brace discipline (Java, C).

#include <string>
#include <string_view>
#include <vector>

#include "causalprompt/text.hpp"

namespace causalprompt {

struct WellFormedness {
  bool ok = true;
  std::string message;

  static WellFormedness good() { return {}; }
  static WellFormedness bad(std::string msg) { return {false, std::move(msg)}; }
};

namespace detail {

inline std::size_t indent_of(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && line[n] == ' ') ++n;
  return n;
}

// Removes string literals and a trailing comment from one line so delimiter
// counting only sees code. Escapes inside literals are honored.
inline std::string code_portion(std::string_view line, std::string_view comment_marker) {
  std::string out;
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      continue;
    }
    if (!comment_marker.empty() && starts_with(line.substr(i), comment_marker)) break;
    out.push_back(c);
  }
  if (in_string) out.push_back('"');  // sentinel: unterminated literal on this line
  return out;
}

}  // namespace detail

inline WellFormedness check_python_block_structure(std::string_view source) {
  int parens = 0;
  std::vector<std::size_t> levels{0};
  bool expect_deeper = false;
  for (const auto& line : split_lines(source)) {
    if (trim_view(line).empty()) continue;
    std::string code = detail::code_portion(line, "#");
    if (code.find('"') != std::string::npos)
      return WellFormedness::bad("unterminated string literal: '" + line + "'");
    for (char c : code) {
      if (c == '(') ++parens;
      if (c == ')' && --parens < 0) return WellFormedness::bad("unbalanced ')': '" + line + "'");
    }
    std::size_t indent = detail::indent_of(line);
    if (expect_deeper) {
      if (indent <= levels.back())
        return WellFormedness::bad("missing indented block after ':': '" + line + "'");
      levels.push_back(indent);
    } else if (indent > levels.back()) {
      return WellFormedness::bad("unexpected indent: '" + line + "'");
    } else {
      while (indent < levels.back()) levels.pop_back();
      if (indent != levels.back())
        return WellFormedness::bad("dedent to unknown level: '" + line + "'");
    }
    std::string_view code_trim = trim_view(code);
    expect_deeper = !code_trim.empty() && code_trim.back() == ':';
  }
  if (parens != 0) return WellFormedness::bad("unbalanced '(' at end of source");
  if (expect_deeper) return WellFormedness::bad("source ends after ':' with no block");
  return WellFormedness::good();
}

// Java and C share the same surface checks: braces and parentheses balance,
// and every code line ends in ';', '{' or '}'.
inline WellFormedness check_braced_source(std::string_view source) {
  int braces = 0;
  int parens = 0;
  for (const auto& line : split_lines(source)) {
    if (trim_view(line).empty()) continue;
    std::string code = detail::code_portion(line, "//");
    if (code.find('"') != std::string::npos)
      return WellFormedness::bad("unterminated string literal: '" + line + "'");
    std::string_view code_trim = trim_view(code);
    if (code_trim.empty()) continue;  // comment-only line
    for (char c : code_trim) {
      if (c == '{') ++braces;
      if (c == '}' && --braces < 0) return WellFormedness::bad("unbalanced '}': '" + line + "'");
      if (c == '(') ++parens;
      if (c == ')' && --parens < 0) return WellFormedness::bad("unbalanced ')': '" + line + "'");
    }
    char last = code_trim.back();
    if (last != ';' && last != '{' && last != '}')
      return WellFormedness::bad("statement not terminated: '" + line + "'");
  }
  if (braces != 0) return WellFormedness::bad("unbalanced '{' at end of source");
  if (parens != 0) return WellFormedness::bad("unbalanced '(' at end of source");
  return WellFormedness::good();
}

}  // namespace causalprompt
