#include <catch2/catch_amalgamated.hpp>

#include "causalprompt/text.hpp"

using namespace causalprompt;

TEST_CASE("normalize_whitespace collapses runs and trims") {
  CHECK(normalize_whitespace("  a  b\tc\n d ") == "a b c d");
  CHECK(normalize_whitespace("plain") == "plain");
  CHECK(normalize_whitespace("") == "");
  CHECK(normalize_whitespace(" \t\n ") == "");
  CHECK(normalize_whitespace("one\r\ntwo") == "one two");
}

TEST_CASE("first_sentence keeps the terminator") {
  CHECK(first_sentence("Wow! Then rain came down.") == "Wow!");
  CHECK(first_sentence("He ran 3.5 miles. Then he stopped.") == "He ran 3.5 miles.");
  CHECK(first_sentence("What?! Then rain.") == "What?!");
  CHECK(first_sentence("No terminator at all") == "No terminator at all");
  CHECK(first_sentence("Short.") == "Short.");
  CHECK(first_sentence("") == "");
}

TEST_CASE("double-quote escaping round-trips") {
  const std::string raw = "a \"quoted\" back\\slash";
  CHECK(escape_double_quoted(raw) == "a \\\"quoted\\\" back\\\\slash");
  CHECK(unescape_double_quoted(escape_double_quoted(raw)) == raw);
  CHECK(escape_double_quoted("plain") == "plain");
}

TEST_CASE("split_lines keeps empty segments") {
  auto lines = split_lines("a\n\nb\n");
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "a");
  CHECK(lines[1] == "");
  CHECK(lines[2] == "b");
  CHECK(lines[3] == "");
}

TEST_CASE("trim_view strips both ends") {
  CHECK(trim_view("  x  ") == "x");
  CHECK(trim_view("\t\n") == "");
}
