#include <map>
#include <random>
#include <set>

#include "doctest.h"

#include "coset_forge/automaton.hpp"
#include "coset_forge/coset.hpp"
#include "coset_forge/error.hpp"
#include "coset_forge/pieces.hpp"
#include "support.hpp"

using namespace coset_forge;
using namespace coset_forge::test;

namespace {
  std::string names(AdmissibleWord const& x) {
    std::string out;
    for (auto const& p : x.pieces) {
      out += (out.empty() ? "" : " ") + p.name();
    }
    return out;
  }

  // Concatenation with no cancellation at any seam.
  bool concatenates(std::vector<Word> const& parts, Word const& whole) {
    LetterString letters;
    for (auto const& p : parts) {
      letters.insert(letters.end(), p.begin(), p.end());
    }
    return Word::reduce(letters) == whole && letters.size() == whole.length();
  }

  void check_identities(PieceAlphabet const& sigma) {
    auto const& basis = sigma.basis();
    std::size_t n     = sigma.index_count();
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= n; ++j) {
        if (!sigma.is_admissible(i, j)) {
          CHECK_THROWS((void)sigma.a(i, j));
          continue;
        }
        Word hij = basis.at(i).h * basis.at(j).h;
        CHECK(concatenates({sigma.a(i, j), sigma.b(i, j)}, hij));
        for (std::size_t k = 1; k <= n; ++k) {
          if (!sigma.is_admissible(j, k)) {
            continue;
          }
          Word hijk = hij * basis.at(k).h;
          auto const& m = sigma.m(i, j, k);
          CHECK(concatenates({sigma.a(i, j), m.word, sigma.b(j, k)}, hijk));
          CHECK(m.mu == basis.at(j).mu);
          CHECK(concatenates({m.alpha, Word::letter(m.mu), m.beta}, m.word));
        }
      }
    }
  }
}  // namespace

TEST_CASE("piece alphabet of the five-generator subgroup") {
  Subgroup      c(five_generators(), 2);
  PieceAlphabet sigma(c.basis());
  CHECK(sigma.index_count() == 10);
  CHECK(sigma.a(1, 1) == w("aaa"));
  CHECK(sigma.a(7, 4) == w("BB"));
  CHECK(sigma.m(1, 2, 3).word == w("bbb"));
  CHECK(sigma.m(7, 4, 2).word == w("aaa"));
  CHECK(sigma.b(4, 2) == w("bb"));
  auto const& m742 = sigma.m(7, 4, 2);
  CHECK(m742.alpha == w("a"));
  CHECK(m742.mu == Letter::generator(0));
  CHECK(m742.beta == w("a"));
  // a74 and the inverse of b42 share a word but stay distinct symbols.
  CHECK(sigma.a(7, 4) == sigma.b(4, 2).inverse());
  PieceRef a74{PieceKind::a, {7, 4, 0}};
  PieceRef b42{PieceKind::b, {4, 2, 0}};
  CHECK(a74 != b42);
  CHECK(a74.name() == "a74");
  CHECK(PieceRef{PieceKind::m, {10, 4, 2}}.name() == "m10,4,2");
  check_identities(sigma);
}

TEST_CASE("piece alphabet of a rank one subgroup") {
  Subgroup      c(ws("a^3"), 2);
  PieceAlphabet sigma(c.basis());
  CHECK(sigma.a(1, 1) == w("aaa"));
  CHECK(sigma.b(1, 1) == w("aaa"));
  CHECK(sigma.h(1) == w("aaa"));
  check_identities(sigma);
}

TEST_CASE("reconstruction identities on random subgroups") {
  std::mt19937_64 rng(30);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Word> gens(1 + rng() % 3);
    for (auto& x : gens) {
      x = random_word(rng, 2, 1 + rng() % 6);
    }
    Subgroup c(gens, 2);
    if (c.basis().size() == 0) {
      continue;
    }
    check_identities(PieceAlphabet(c.basis()));
  }
}

TEST_CASE("admissible factorization") {
  Subgroup      c(five_generators(), 2);
  PieceAlphabet sigma(c.basis());
  auto fact = [&](std::string_view x) {
    return admissible_factorization(c.graph(), c.tree(), sigma, w(x));
  };
  CHECK(names(fact("aaa")) == "h1");
  CHECK(names(fact("aaabbb")) == "a12 b12");
  CHECK(names(fact("BBaaabb")) == "a74 m742 b42");
  CHECK(fact("BBaaabb").underlying == w("BBaaabb"));
  CHECK_THROWS_AS((void)fact("1"), Error);
  CHECK_THROWS_AS((void)fact("a"), Error);
  auto y = admissible_word(sigma, std::vector<std::size_t>{7, 4, 2});
  CHECK(names(y) == "a74 m742 b42");
}

TEST_CASE("admissible factorization round trip and injectivity") {
  for (auto const& gens : {five_generators(), ws("a^2,b^2,ab"), ws("abA,b^3")}) {
    Subgroup      c(gens, 2);
    PieceAlphabet sigma(c.basis());
    std::map<std::vector<PieceRef>, Word> seen;
    for (auto const& x : enumerate(c.automaton(), 12)) {
      if (x.empty()) {
        continue;
      }
      auto f = admissible_factorization(c.graph(), c.tree(), sigma, x);
      CHECK(f.underlying == x);
      std::vector<Word> parts;
      for (auto const& p : f.pieces) {
        parts.push_back(sigma.word(p));
      }
      CHECK(concatenates(parts, x));
      CHECK(seen.emplace(f.pieces, x).second);
    }
    CHECK(seen.size() > 10);
  }
}

TEST_CASE("validate nielsen") {
  Subgroup c(five_generators(), 2);
  auto     report = validate_nielsen(c.basis(), ab());
  CHECK(report.ok());
  auto full = validate_nielsen(c.graph(), c.tree(), c.basis(), ab(), 6);
  CHECK(full.ok());
  CHECK(full.max_cancellation <= c.basis().M());
  CHECK(full.checked > 0);

  auto bad = NielsenBasis::from_words(ws("a,aa"), 2);
  CHECK_FALSE(validate_nielsen(bad, ab()).ok());
  CHECK(validate_nielsen(Subgroup(ws("a^3"), 2).basis(), ab()).ok());
}
