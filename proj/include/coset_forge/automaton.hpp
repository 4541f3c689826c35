#ifndef COSET_FORGE_AUTOMATON_HPP_
#define COSET_FORGE_AUTOMATON_HPP_

// Finite automata over X u X^-1 with epsilon arrows.
//
// Deterministic automata are partial: a missing transition goes to an
// implicit dead state. Canonical DFAs are minimal, trimmed, and numbered in
// breadth-first order from the initial state, so two automata accept the
// same language iff their canonical DFAs compare equal.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coset_forge/stallings.hpp"
#include "coset_forge/word.hpp"

namespace coset_forge {

  //! Label of an epsilon arrow.
  inline constexpr std::int32_t epsilon = -1;

  struct Arrow {
    std::uint32_t source;
    std::int32_t  label;
    std::uint32_t target;

    auto operator<=>(Arrow const&) const = default;
  };

  class Automaton {
   public:
    explicit Automaton(std::size_t rank, std::size_t state_count = 0);

    [[nodiscard]] std::size_t rank() const noexcept {
      return _rank;
    }
    [[nodiscard]] std::size_t letter_count() const noexcept {
      return 2 * _rank;
    }
    [[nodiscard]] std::size_t state_count() const noexcept {
      return _final.size();
    }
    [[nodiscard]] std::span<Arrow const> arrows() const noexcept {
      return _arrows;
    }
    [[nodiscard]] std::span<std::uint32_t const> initial() const noexcept {
      return _initial;
    }
    [[nodiscard]] bool is_final(std::uint32_t s) const noexcept {
      return _final[s];
    }
    [[nodiscard]] std::vector<std::uint32_t> finals() const;

    std::uint32_t add_state(bool final = false);
    void          add_arrow(std::uint32_t source, Letter x, std::uint32_t target);
    void          add_epsilon(std::uint32_t source, std::uint32_t target);
    void          add_initial(std::uint32_t s);
    void          set_final(std::uint32_t s, bool value = true);

    //! No epsilon arrows, one initial state, at most one arrow per state and
    //! label.
    [[nodiscard]] bool is_deterministic() const;

    bool operator==(Automaton const&) const = default;

   private:
    friend Automaton canonical_dfa(Automaton const&);
    std::size_t                _rank;
    std::vector<Arrow>         _arrows;
    std::vector<std::uint32_t> _initial;
    std::vector<bool>          _final;
  };

  //! Subset construction followed by Hopcroft minimisation, trimming and
  //! breadth-first renumbering.
  Automaton canonical_dfa(Automaton const& a);

  bool language_equal(Automaton const& a, Automaton const& b);

  //! Accepts exactly the letter sequence w.
  Automaton word_automaton(std::size_t rank, std::span<Letter const> w);
  Automaton word_automaton(std::size_t rank, Word const& w);

  //! Every edge gives an x-arrow forwards and an x^-1-arrow backwards; the
  //! basepoint is the only initial and final state.
  Automaton from_graph(SubgroupGraph const& g);

  //! 2m + 1 state DFA of freely reduced words; state 0 is the start and
  //! state 1 + c remembers that the last letter had code c.
  Automaton reduced_acceptor(std::size_t rank);

  Automaton intersect(Automaton const& a, Automaton const& b);
  //! Disjoint union with epsilon arrows from the finals of a to the initial
  //! states of b.
  Automaton concatenate(Automaton const& a, Automaton const& b);
  Automaton concatenate(std::span<Automaton const> parts);
  Automaton union_of(Automaton const& a, Automaton const& b);

  //! Replaces every x-arrow, x a letter of the source alphabet, by a path
  //! spelling images[x.code()] over an alphabet of rank target_rank.
  Automaton substitute(Automaton const& a, std::span<Word const> images,
                       std::size_t target_rank);

  //! Saturates with epsilon arrows p -> q whenever p -x-> r ~> r' -x^-1-> q
  //! (r ~> r' an epsilon path), to a fixpoint; then intersects with the
  //! reduced acceptor. The result accepts the reduced forms of L(a).
  Automaton benois_reduce(Automaton const& a);

  //! Automaton for the reduced words of L(a1) L(a2), assuming no product
  //! cancels more than k letters. A cancellation word u links p in a1 (u^-1
  //! readable from p to a final state) with q in a2 (u readable from the
  //! start to q); the pairs are found by a breadth-first search of depth at
  //! most k. Pairs of accepted words up to `validation_length` are checked
  //! against k and KBoundViolated is thrown on excess.
  Automaton k_reduced_concat(Automaton const& a1, Automaton const& a2,
                             std::uint64_t k,
                             std::size_t   validation_length = 3);

  //! Reduced words w1 o f o w2 with no cancellation at either seam.
  Automaton cone_automaton(Word const& w1, Word const& w2, std::size_t rank);

  bool accepts(Automaton const& a, std::span<Letter const> w);
  inline bool accepts(Automaton const& a, Word const& w) {
    return accepts(a, w.letters());
  }

  //! Accepted freely reduced words of length at most max_length, shortlex.
  std::vector<Word> enumerate(Automaton const& a, std::size_t max_length);
  //! Accepted letter sequences, reduced or not, shortlex.
  std::vector<LetterString> enumerate_strings(Automaton const& a,
                                              std::size_t      max_length);
  //! Shortlex least accepted reduced word.
  std::optional<Word> shortest_word(Automaton const& a);

  //! "states N initial I final F1,F2" followed by "src label dst" lines,
  //! with epsilon written "eps".
  std::string to_text(Automaton const& a, Alphabet const& alphabet);
  Automaton   from_text(std::string_view text, Alphabet const& alphabet);

}  // namespace coset_forge

#endif  // COSET_FORGE_AUTOMATON_HPP_
