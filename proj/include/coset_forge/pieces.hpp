#ifndef COSET_FORGE_PIECES_HPP_
#define COSET_FORGE_PIECES_HPP_

// The piece alphabet of a Nielsen basis: the parts of generators that
// survive in reduced products of two and three generators, and the
// factorisation of subgroup elements into such pieces.
//
// Indices are 1-based over Y u Y^-1, with r + i naming h_i^-1. For an
// admissible pair (h_j != h_i^-1)
//
//   reduced(h_i h_j)     = a_ij o b_ij
//   reduced(h_i h_j h_k) = a_ij o m_ijk o b_jk
//
// and m_ijk = alpha o mu(h_j) o beta.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coset_forge/stallings.hpp"
#include "coset_forge/word.hpp"

namespace coset_forge {

  enum class PieceKind { a, b, m, h };

  //! A symbol of the piece alphabet. Unused trailing indices are 0.
  struct PieceRef {
    PieceKind                  kind;
    std::array<std::size_t, 3> indices{};

    //! "a74", "m742", "h1"; indices are comma separated once any of them
    //! has more than one digit.
    [[nodiscard]] std::string name() const;

    auto operator<=>(PieceRef const&) const = default;
  };

  struct MiddlePiece {
    Word   word;
    Word   alpha;
    Letter mu;
    Word   beta;
  };

  class PieceAlphabet {
   public:
    explicit PieceAlphabet(NielsenBasis basis);

    [[nodiscard]] NielsenBasis const& basis() const noexcept {
      return _basis;
    }
    //! 2r.
    [[nodiscard]] std::size_t index_count() const noexcept {
      return 2 * _basis.size();
    }
    [[nodiscard]] bool is_admissible(std::size_t i,
                                     std::size_t j) const noexcept {
      return j != _basis.inverse_index(i);
    }

    [[nodiscard]] Word const&        a(std::size_t i, std::size_t j) const;
    [[nodiscard]] Word const&        b(std::size_t i, std::size_t j) const;
    [[nodiscard]] MiddlePiece const& m(std::size_t i, std::size_t j,
                                       std::size_t k) const;
    [[nodiscard]] Word const&        h(std::size_t i) const;
    [[nodiscard]] Word const&        word(PieceRef const& p) const;

    //! All symbols in index order: h, then a and b per pair, then m.
    [[nodiscard]] std::vector<PieceRef> symbols() const;

   private:
    [[nodiscard]] std::size_t pair(std::size_t i, std::size_t j) const;

    NielsenBasis             _basis;
    std::vector<Word>        _a;
    std::vector<Word>        _b;
    std::vector<MiddlePiece> _m;
  };

  struct AdmissibleWord {
    std::vector<PieceRef> pieces;
    Word                  underlying;
  };

  //! Pieces of the Y-reduced word `expression` (1-based indices).
  AdmissibleWord admissible_word(PieceAlphabet const&          sigma,
                                 std::span<std::size_t const> expression);

  //! Factorisation of c along its Y-expression, read off g and `tree`,
  //! which must be the graph and tree the basis was built from. Throws
  //! IdentityWord or NotInSubgroup.
  AdmissibleWord admissible_factorization(SubgroupGraph const& g,
                                          SpanningTree const&  tree,
                                          PieceAlphabet const& sigma,
                                          Word const&          c);

  struct NielsenReport {
    std::vector<std::string> violations;
    //! Largest cn(f, h) over h in Y u Y^-1 and f^-1 in the Schreier
    //! transversal, i.e. f of minimal length in fC.
    std::size_t max_cancellation = 0;
    std::size_t checked          = 0;

    [[nodiscard]] bool ok() const noexcept {
      return violations.empty();
    }
  };

  //! Nielsen properties of the basis, plus cn(f, h) <= M for every f with
  //! f^-1 in the Schreier transversal of g up to `transversal_length`.
  NielsenReport validate_nielsen(NielsenBasis const& basis,
                                 Alphabet const&     alphabet);
  NielsenReport validate_nielsen(SubgroupGraph const& g,
                                 SpanningTree const&  tree,
                                 NielsenBasis const&  basis,
                                 Alphabet const&      alphabet,
                                 std::size_t          transversal_length);

}  // namespace coset_forge

#endif  // COSET_FORGE_PIECES_HPP_
