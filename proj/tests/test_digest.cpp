#include <catch2/catch_amalgamated.hpp>

#include "causalprompt/digest.hpp"

using namespace causalprompt;

TEST_CASE("sha256 against externally computed values") {
  // sha256sum of the same byte strings, frozen here
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("canonical request layout is length-prefixed") {
  std::string canon = canonical_request("live", "m1", "hello", 0.0, 1.0, 64, {"\n"});
  CHECK(canon == "4:live2:m15:hello1:01:12:641:11:\n");
  CHECK(sha256_hex(canon) ==
        "67a1a117ef7a7d59b2fa056fd53f1895d8c2034046c6d5e3197a3f8cad6eea1d");
}

TEST_CASE("field boundaries cannot be forged by content") {
  // Same concatenated bytes, different field split: digests must differ.
  std::string a = canonical_request("p", "ab", "c", 0.0, 1.0, 1, {});
  std::string b = canonical_request("p", "a", "bc", 0.0, 1.0, 1, {});
  CHECK(a != b);
  CHECK(sha256_hex(a) != sha256_hex(b));
}

TEST_CASE("stop sequences participate in the digest") {
  std::string none = canonical_request("p", "m", "x", 0.0, 1.0, 8, {});
  std::string one = canonical_request("p", "m", "x", 0.0, 1.0, 8, {"\n"});
  std::string two = canonical_request("p", "m", "x", 0.0, 1.0, 8, {"\n", "# end"});
  CHECK(none != one);
  CHECK(one != two);
}

TEST_CASE("decoding parameters participate in the digest") {
  std::string base = canonical_request("p", "m", "x", 0.0, 1.0, 8, {});
  CHECK(canonical_request("p", "m", "x", 0.5, 1.0, 8, {}) != base);
  CHECK(canonical_request("p", "m", "x", 0.0, 0.9, 8, {}) != base);
  CHECK(canonical_request("p", "m", "x", 0.0, 1.0, 9, {}) != base);
}

TEST_CASE("doubles render with %.17g") {
  CHECK(format_double_17(0.0) == "0");
  CHECK(format_double_17(1.0) == "1");
  CHECK(format_double_17(0.5) == "0.5");
  // bit-identical doubles always produce identical text
  double third = 1.0 / 3.0;
  CHECK(format_double_17(third) == format_double_17(0.33333333333333331));
}
