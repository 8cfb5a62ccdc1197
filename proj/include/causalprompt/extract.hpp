#pragma once

// Recovers plain event text from a raw model completion according to the
// extraction rule the renderer attached to the prompt. The extracted text is
// always whitespace-normalized; an extraction that leaves nothing is an
// error, a missing end marker or closing quote in block/literal modes is
// tolerated but flagged so pipelines can count truncated generations.

#include <string>
#include <string_view>
#include <vector>

#include "causalprompt/error.hpp"
#include "causalprompt/render.hpp"
#include "causalprompt/text.hpp"

namespace causalprompt {

struct Extraction {
  std::string text;
  bool end_marker_missing = false;  // block/literal terminator never appeared
};

// Strips comment syntax from each line: leading whitespace, one marker
// occurrence, one following space. Lines left empty are dropped; order is
// preserved; non-comment lines pass through with leading whitespace removed.
inline std::vector<std::string> strip_comment_lines(const std::vector<std::string>& lines,
                                                    std::string_view marker) {
  std::vector<std::string> out;
  for (const auto& line : lines) {
    std::string_view v = line;
    while (!v.empty() && is_space_byte(v.front())) v.remove_prefix(1);
    if (starts_with(v, marker)) {
      v.remove_prefix(marker.size());
      if (!v.empty() && v.front() == ' ') v.remove_prefix(1);
    }
    if (!v.empty()) out.emplace_back(v);
  }
  return out;
}

namespace detail {

// Scan for the first double quote not preceded by an odd run of backslashes.
inline std::size_t find_unescaped_quote(std::string_view s, std::size_t from) {
  for (std::size_t i = from; i < s.size(); ++i) {
    if (s[i] != '"') continue;
    std::size_t backslashes = 0;
    for (std::size_t j = i; j > from && s[j - 1] == '\\'; --j) ++backslashes;
    if (backslashes % 2 == 0) return i;
  }
  return std::string_view::npos;
}

inline Extraction extract_comment_line(std::string_view completion, const ExtractionRule& rule) {
  std::string_view first = completion.substr(0, completion.find('\n'));
  while (!first.empty() && is_space_byte(first.front())) first.remove_prefix(1);
  while (starts_with(first, rule.comment_marker)) {
    first.remove_prefix(rule.comment_marker.size());
    if (!first.empty() && first.front() == ' ') first.remove_prefix(1);
  }
  Extraction ex;
  ex.text = normalize_whitespace(first);
  return ex;
}

inline Extraction extract_comment_block(std::string_view completion, const ExtractionRule& rule) {
  Extraction ex;
  ex.end_marker_missing = true;
  std::vector<std::string> pieces;
  for (const auto& line : split_lines(completion)) {
    std::string_view v = line;
    while (!v.empty() && is_space_byte(v.front())) v.remove_prefix(1);
    bool is_comment = starts_with(v, rule.comment_marker);
    if (is_comment) {
      v.remove_prefix(rule.comment_marker.size());
      if (!v.empty() && v.front() == ' ') v.remove_prefix(1);
    } else if (rule.strict && !trim_view(v).empty() && !pieces.empty()) {
      fail(Errc::ParseError,
           "non-comment line inside comment block: '" + std::string(trim_view(v)) + "'");
    }
    std::string content = normalize_whitespace(v);
    if (content == rule.end_marker && is_comment) {
      ex.end_marker_missing = false;
      break;
    }
    if (!is_comment && !pieces.empty()) continue;  // trailing code noise after the block
    if (!content.empty()) pieces.push_back(std::move(content));
  }
  std::string joined;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i) joined += ' ';
    joined += pieces[i];
  }
  ex.text = joined;
  return ex;
}

inline Extraction extract_string_literal(std::string_view completion) {
  std::string_view v = completion;
  std::size_t lead = 0;
  while (lead < v.size() && is_space_byte(v[lead])) ++lead;
  Extraction ex;
  std::string_view raw;
  if (lead < v.size() && v[lead] == '"') {
    // The completion restates the opening quote: parse a whole literal.
    std::size_t close = find_unescaped_quote(v, lead + 1);
    if (close == std::string_view::npos)
      fail(Errc::UnterminatedLiteral, "string literal is never closed");
    raw = v.substr(lead + 1, close - lead - 1);
  } else {
    // Usual case: the prompt already opened the literal, so the completion
    // starts inside it and runs to the closing quote (or was cut before it).
    std::size_t close = find_unescaped_quote(v, 0);
    ex.end_marker_missing = close == std::string_view::npos;
    raw = ex.end_marker_missing ? v : v.substr(0, close);
  }
  ex.text = normalize_whitespace(unescape_double_quoted(raw));
  return ex;
}

inline Extraction extract_text_continuation(std::string_view completion) {
  std::string kept;
  for (const auto& line : split_lines(completion)) {
    if (trim_view(line).empty() && !kept.empty()) break;
    if (!kept.empty()) kept += ' ';
    kept += line;
  }
  Extraction ex;
  ex.text = normalize_whitespace(kept);
  return ex;
}

}  // namespace detail

inline Extraction extract(std::string_view completion, const ExtractionRule& rule) {
  Extraction ex;
  switch (rule.kind) {
    case ExtractionKind::CommentLineUntilNewline:
      ex = detail::extract_comment_line(completion, rule);
      break;
    case ExtractionKind::CommentBlockUntilEndMarker:
      ex = detail::extract_comment_block(completion, rule);
      break;
    case ExtractionKind::StringLiteral:
      ex = detail::extract_string_literal(completion);
      break;
    case ExtractionKind::TextContinuation:
      ex = detail::extract_text_continuation(completion);
      break;
  }
  if (ex.text.empty()) fail(Errc::EmptyExtraction, "no event text found in completion");
  return ex;
}

}  // namespace causalprompt
