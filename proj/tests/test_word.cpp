#include <random>

#include "doctest.h"

#include "coset_forge/error.hpp"
#include "coset_forge/word.hpp"
#include "support.hpp"

using namespace coset_forge;
using namespace coset_forge::test;

namespace {
  Letter const a = Letter::generator(0);
  Letter const A = Letter::generator(0, true);
  Letter const b = Letter::generator(1);
  Letter const B = Letter::generator(1, true);

  // Independent reduction by repeated deletion of one cancelling pair.
  LetterString naive_reduce(LetterString s) {
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == s[i + 1].inverse()) {
          s.erase(s.begin() + i, s.begin() + i + 2);
          changed = true;
          break;
        }
      }
    }
    return s;
  }
}  // namespace

TEST_CASE("reduce") {
  CHECK(Word::reduce({a, A}).empty());
  CHECK(Word::reduce({a, b, B, a}) == w("aa"));
  LetterString h7h4{B, B, B, b, a, a, a, B};
  CHECK(Word::reduce(h7h4) == w("BBaaaB"));
}

TEST_CASE("reduce is idempotent and confluent, exhaustive to length 8") {
  LetterString s;
  std::size_t  count = 0;
  for (std::size_t n = 0; n <= 8; ++n) {
    std::size_t total = std::size_t(1) << (2 * n);
    for (std::size_t code = 0; code < total; ++code) {
      s.clear();
      for (std::size_t i = 0; i < n; ++i) {
        s.push_back(Letter(static_cast<std::uint32_t>((code >> (2 * i)) & 3)));
      }
      Word r = Word::reduce(s);
      REQUIRE(Word::reduce(r.letters()) == r);
      auto expected = naive_reduce(s);
      REQUIRE(LetterString(r.begin(), r.end()) == expected);
      ++count;
    }
  }
  CHECK(count == 87381);
}

TEST_CASE("reduce is idempotent on random sequences up to length 12") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5000; ++trial) {
    LetterString s(rng() % 13);
    for (auto& x : s) {
      x = Letter(static_cast<std::uint32_t>(rng() % 6));
    }
    Word r = Word::reduce(s);
    CHECK(Word::reduce(r.letters()) == r);
    CHECK(LetterString(r.begin(), r.end()) == naive_reduce(s));
  }
}

TEST_CASE("multiply") {
  CHECK(w("aaa") * w("bbb") == w("aaabbb"));
  CHECK(w("ab") * w("Ba") == w("aa"));
  CHECK(w("BBB") * w("baaaB") == w("BBaaaB"));
}

TEST_CASE("multiply is associative") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10000; ++trial) {
    Word u = random_word(rng, 2, rng() % 7);
    Word v = random_word(rng, 2, rng() % 7);
    Word x = random_word(rng, 2, rng() % 7);
    REQUIRE((u * v) * x == u * (v * x));
  }
}

TEST_CASE("cn") {
  CHECK(cn({w("aaa"), w("bbb")}) == 0);
  CHECK(cn({w("ab"), w("BA")}) == 2);
  CHECK(cn({w("aa"), w("Ab"), w("Ba")}) == 2);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    Word u = random_word(rng, 2, rng() % 9);
    Word v = random_word(rng, 2, rng() % 9);
    CHECK(cn({u, u.inverse()}) == u.length());
    bool reduced = u.empty() || v.empty() || u.back() != v.front().inverse();
    CHECK((cn({u, v}) == 0) == reduced);
    CHECK(2 * cn({u, v}) == u.length() + v.length() - (u * v).length());
    CHECK(cn({u, v}) == cancellation(u, v));
  }
}

TEST_CASE("conjugate") {
  CHECK(conjugate(w("a"), Word()) == w("a"));
  CHECK(conjugate(w("aaa"), w("a")) == w("aaa"));
  CHECK(conjugate(w("baaaB"), w("B")) == w("bbaaaBB"));
  CHECK(conjugate(w("a"), w("b")) == w("Bab"));
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    Word c = random_word(rng, 2, rng() % 8);
    Word g = random_word(rng, 2, rng() % 8);
    CHECK(conjugate(conjugate(c, g), g.inverse()) == c);
  }
}

TEST_CASE("surviving letters") {
  std::vector<Word> factors{w("ab"), w("Bab"), w("B")};
  auto survive = surviving_letters(factors);
  REQUIRE(survive.size() == 3);
  CHECK(survive[0] == std::vector<bool>{true, false});
  CHECK(survive[1] == std::vector<bool>{false, true, false});
  CHECK(survive[2] == std::vector<bool>{false});
}

TEST_CASE("text format") {
  CHECK(w("a^-3") == w("AAA"));
  CHECK(w("1").empty());
  CHECK(w("").empty());
  CHECK(str(w("ab^2A")) == "abbA");
  CHECK(str(Word()) == "1");
  CHECK(ws("a,b^2").size() == 2);
  CHECK_THROWS_AS((void)w("c"), ParseError);
  CHECK_THROWS_AS((void)w("a^"), ParseError);
  Alphabet big(28);
  CHECK(big.name(27) == "x28");
  Word x = big.parse("x28X27x1");
  CHECK(x.length() == 3);
  CHECK(big.format(x) == "x28X27x1");
}

TEST_CASE("shortlex order") {
  CHECK(w("b") < w("aa"));
  CHECK(w("a") < w("A"));
  CHECK(w("A") < w("b"));
  CHECK(w("b") < w("B"));
}
