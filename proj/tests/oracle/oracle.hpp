#ifndef COSET_FORGE_ORACLE_HPP_
#define COSET_FORGE_ORACLE_HPP_

// Brute-force reference computations for tests. Nothing here uses graphs or
// automata; the only shared code is free reduction of words.
//
// Subgroup balls are found by a breadth-first search over products of
// generators. For an N-reduced generating set (Lyndon-Schupp) every prefix
// of a reduced product is at most one generator length longer than the
// product, and a product of n generators has length at least n, so
// searching to depth L with intermediate words capped at L + max generator
// length finds every element of length at most L.

#include <cstddef>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "coset_forge/word.hpp"

namespace coset_forge::oracle {

  struct BallBounds {
    //! Longest word reported.
    std::size_t max_length = 0;
    //! Most generator factors multiplied.
    std::size_t depth = 0;
  };

  //! Lyndon-Schupp N0, N1, N2 over the generators and their inverses.
  bool is_n_reduced(std::span<Word const> generators);

  //! Reduced products of at most `depth` generators with length at most
  //! max_length; intermediate products longer than max_length plus the
  //! longest generator are discarded.
  std::set<Word> brute_subgroup_ball(std::span<Word const> generators,
                                     BallBounds              bounds);

  //! {c1 f c2} of length at most bounds.max_length with c1, c2 in the
  //! subgroup ball of radius factor_length and depth bounds.depth.
  std::set<Word> brute_coset_ball(std::span<Word const> generators,
                                  Word const& f, BallBounds bounds,
                                  std::size_t factor_length);
  //! Same result, one thread.
  std::set<Word> brute_coset_ball_serial(std::span<Word const> generators,
                                         Word const& f, BallBounds bounds,
                                         std::size_t factor_length);

  struct SaturatedBall {
    std::set<Word> words;
    std::size_t    factor_length = 0;
    bool           saturated     = false;
  };

  //! brute_coset_ball with factor length R = first, first + 2, ... until
  //! two consecutive radii agree or R exceeds last. Depth is R.
  SaturatedBall saturated_coset_ball(std::span<Word const> generators,
                                     Word const& f, std::size_t max_length,
                                     std::size_t first, std::size_t last);

  //! Pairs (x, y) in the subgroup ball with x g = f y.
  std::set<std::pair<Word, Word>> brute_solutions(
      std::span<Word const> generators, Word const& g, Word const& f,
      BallBounds bounds);

  //! All reduced words of length at most n over the given rank, shortlex.
  std::vector<Word> free_ball(std::size_t rank, std::size_t n);

}  // namespace coset_forge::oracle

#endif  // COSET_FORGE_ORACLE_HPP_
