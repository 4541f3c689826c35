#include <algorithm>
#include <random>

#include "doctest.h"

#include "oracle.hpp"
#include "support.hpp"

using namespace coset_forge;
using namespace coset_forge::test;
using oracle::BallBounds;

namespace {
  std::set<Word> set_of(std::string_view words) {
    auto v = ws(words);
    return {v.begin(), v.end()};
  }

  bool subset(std::set<Word> const& x, std::set<Word> const& y) {
    return std::includes(y.begin(), y.end(), x.begin(), x.end());
  }
}  // namespace

TEST_CASE("N-reduced sets") {
  CHECK(oracle::is_n_reduced(five_generators()));
  CHECK(oracle::is_n_reduced(ws("a,b")));
  CHECK_FALSE(oracle::is_n_reduced(ws("a,aa")));
  CHECK_FALSE(oracle::is_n_reduced(ws("ab,b")));
  CHECK_FALSE(oracle::is_n_reduced(ws("1")));
}

TEST_CASE("subgroup ball") {
  CHECK(oracle::brute_subgroup_ball(ws("a^3"), {6, 2})
        == set_of("1,aaa,AAA,aaaaaa,AAAAAA"));
  CHECK(oracle::brute_subgroup_ball(ws("a,b"), {1, 1}) == set_of("1,a,A,b,B"));
  auto ball = oracle::brute_subgroup_ball(five_generators(), {6, 3});
  CHECK(ball.count(w("BBaaabb")) == 0);
  for (auto const* x : {"aaa", "bbb", "aaabbb", "bbbbbb", "abbA", "baaaB",
                        "babbAB"}) {
    CHECK(ball.count(w(x)) == 1);
  }
  CHECK(oracle::brute_subgroup_ball(five_generators(), {7, 3}).count(
            w("BBaaabb"))
        == 1);
}

TEST_CASE("coset ball") {
  auto b3 = oracle::brute_coset_ball(ws("a"), w("b"), {3, 3}, 3);
  CHECK(b3 == set_of("b,ab,Ab,ba,bA,aab,AAb,aba,abA,Aba,AbA,baa,bAA"));
  CHECK(oracle::brute_coset_ball(ws("a^2"), w("a"), {3, 2}, 4)
        == set_of("a,A,aaa,AAA"));
  auto five = oracle::brute_coset_ball(five_generators(), w("a"), {7, 2}, 7);
  CHECK(five.count(w("a")) == 1);
  CHECK(five.count(w("aaaa")) == 1);
  CHECK(five.count(w("BBaaaabb")) == 0);
  CHECK(five.count(w("b")) == 0);
}

TEST_CASE("parallel and serial coset balls agree") {
  std::mt19937_64 rng(50);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Word> gens(1 + rng() % 3);
    for (auto& x : gens) {
      x = random_word(rng, 2, 1 + rng() % 5);
    }
    Word f = random_word(rng, 2, 1 + rng() % 3);
    CHECK(oracle::brute_coset_ball(gens, f, {6, 4}, 6)
          == oracle::brute_coset_ball_serial(gens, f, {6, 4}, 6));
  }
}

TEST_CASE("coset ball matches all products of ball elements") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Word> gens(1 + rng() % 2);
    for (auto& x : gens) {
      x = random_word(rng, 2, 1 + rng() % 4);
    }
    Word f    = random_word(rng, 2, 1 + rng() % 3);
    auto ball = oracle::brute_subgroup_ball(gens, {5, 4});
    std::set<Word> expected;
    for (auto const& x : ball) {
      for (auto const& y : ball) {
        Word g = x * f * y;
        if (g.length() <= 5) {
          expected.insert(g);
        }
      }
    }
    CHECK(oracle::brute_coset_ball(gens, f, {5, 4}, 5) == expected);
  }
}

TEST_CASE("monotone and independent of generator order") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Word> gens(1 + rng() % 3);
    for (auto& x : gens) {
      x = random_word(rng, 2, 1 + rng() % 5);
    }
    Word f     = random_word(rng, 2, 1 + rng() % 3);
    auto small = oracle::brute_subgroup_ball(gens, {4, 3});
    auto large = oracle::brute_subgroup_ball(gens, {6, 4});
    CHECK(subset(small, large));
    CHECK(subset(oracle::brute_coset_ball(gens, f, {4, 3}, 4),
                 oracle::brute_coset_ball(gens, f, {6, 4}, 6)));
    auto reversed = gens;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(oracle::brute_subgroup_ball(reversed, {6, 4}) == large);
    CHECK(oracle::brute_coset_ball(reversed, f, {5, 4}, 5)
          == oracle::brute_coset_ball(gens, f, {5, 4}, 5));
  }
}

TEST_CASE("saturated coset ball") {
  auto s = oracle::saturated_coset_ball(ws("a^2"), w("a"), 5, 3, 11);
  CHECK(s.saturated);
  CHECK(s.words == set_of("a,A,aaa,AAA,aaaaa,AAAAA"));
}

TEST_CASE("brute solutions") {
  using Pairs = std::set<std::pair<Word, Word>>;
  CHECK(oracle::brute_solutions(ws("a"), w("b"), w("b"), {6, 6})
        == Pairs{{Word(), Word()}});
  CHECK(oracle::brute_solutions(ws("a^2"), w("a"), w("a"), {4, 2})
        == Pairs{{Word(), Word()},
                 {w("aa"), w("aa")},
                 {w("AA"), w("AA")},
                 {w("aaaa"), w("aaaa")},
                 {w("AAAA"), w("AAAA")}});
  CHECK(oracle::brute_solutions(five_generators(), w("a"), w("a"), {3, 1})
            .count({w("aaa"), w("aaa")})
        == 1);
}

TEST_CASE("free ball") {
  auto ball = oracle::free_ball(2, 2);
  CHECK(ball.size() == 17);
  CHECK(std::is_sorted(ball.begin(), ball.end()));
  CHECK(oracle::free_ball(3, 1).size() == 7);
}
