#include "coset_forge/pieces.hpp"

#include <algorithm>

#include "coset_forge/error.hpp"

namespace coset_forge {

  std::string PieceRef::name() const {
    std::size_t count = kind == PieceKind::h ? 1 : kind == PieceKind::m ? 3 : 2;
    bool        wide  = std::any_of(indices.begin(), indices.begin() + count,
                            [](std::size_t i) { return i >= 10; });
    std::string out(1, "abmh"[static_cast<int>(kind)]);
    for (std::size_t i = 0; i < count; ++i) {
      if (wide && i > 0) {
        out += ',';
      }
      out += std::to_string(indices[i]);
    }
    return out;
  }

  namespace {
    // Letters [first, last) of w, empty if the range is inverted.
    Word slice(Word const& w, std::size_t first, std::size_t last) {
      last = std::min(last, w.length());
      return first >= last ? Word() : w.subword(first, last - first);
    }
  }  // namespace

  PieceAlphabet::PieceAlphabet(NielsenBasis basis) : _basis(std::move(basis)) {
    std::size_t const n = index_count();
    _a.resize(n * n);
    _b.resize(n * n);
    _m.resize(n * n * n);
    std::vector<std::size_t> cancel(n * n, 0);
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= n; ++j) {
        if (!is_admissible(i, j)) {
          continue;
        }
        Word const& hi = h(i);
        Word const& hj = h(j);
        std::size_t c  = cancellation(hi, hj);
        cancel[pair(i, j)] = c;
        _a[pair(i, j)]     = slice(hi, 0, hi.length() - c);
        _b[pair(i, j)]     = slice(hj, c, hj.length());
      }
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= n; ++j) {
        if (!is_admissible(i, j)) {
          continue;
        }
        NielsenGenerator const& g = _basis.at(j);
        std::size_t const       centre = g.central_position();
        for (std::size_t k = 1; k <= n; ++k) {
          if (!is_admissible(j, k)) {
            continue;
          }
          std::size_t first = cancel[pair(i, j)];
          std::size_t last  = g.h.length() - cancel[pair(j, k)];
          _m[pair(i, j) * n + (k - 1)]
              = {slice(g.h, first, last), slice(g.h, first, centre), g.mu,
                 slice(g.h, centre + 1, last)};
        }
      }
    }
  }

  std::size_t PieceAlphabet::pair(std::size_t i, std::size_t j) const {
    if (i == 0 || j == 0 || i > index_count() || j > index_count()) {
      throw Error(ErrorCode::invalid_argument, "piece index out of range");
    }
    return (i - 1) * index_count() + (j - 1);
  }

  Word const& PieceAlphabet::a(std::size_t i, std::size_t j) const {
    if (!is_admissible(i, j)) {
      throw Error(ErrorCode::invalid_argument,
                  "a_ij is undefined for h_j = h_i^-1");
    }
    return _a[pair(i, j)];
  }

  Word const& PieceAlphabet::b(std::size_t i, std::size_t j) const {
    if (!is_admissible(i, j)) {
      throw Error(ErrorCode::invalid_argument,
                  "b_ij is undefined for h_j = h_i^-1");
    }
    return _b[pair(i, j)];
  }

  MiddlePiece const& PieceAlphabet::m(std::size_t i, std::size_t j,
                                      std::size_t k) const {
    if (!is_admissible(i, j) || !is_admissible(j, k)) {
      throw Error(ErrorCode::invalid_argument,
                  "m_ijk is undefined unless both pairs are admissible");
    }
    return _m[pair(i, j) * index_count() + (k - 1)];
  }

  Word const& PieceAlphabet::h(std::size_t i) const {
    return _basis.at(i).h;
  }

  Word const& PieceAlphabet::word(PieceRef const& p) const {
    auto const& [i, j, k] = p.indices;
    switch (p.kind) {
      case PieceKind::a:
        return a(i, j);
      case PieceKind::b:
        return b(i, j);
      case PieceKind::m:
        return m(i, j, k).word;
      case PieceKind::h:
        break;
    }
    return h(i);
  }

  std::vector<PieceRef> PieceAlphabet::symbols() const {
    std::size_t const     n = index_count();
    std::vector<PieceRef> out;
    for (std::size_t i = 1; i <= n; ++i) {
      out.push_back({PieceKind::h, {i, 0, 0}});
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= n; ++j) {
        if (is_admissible(i, j)) {
          out.push_back({PieceKind::a, {i, j, 0}});
          out.push_back({PieceKind::b, {i, j, 0}});
        }
      }
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t k = 1; k <= n; ++k) {
          if (is_admissible(i, j) && is_admissible(j, k)) {
            out.push_back({PieceKind::m, {i, j, k}});
          }
        }
      }
    }
    return out;
  }

  AdmissibleWord admissible_word(PieceAlphabet const&          sigma,
                                 std::span<std::size_t const> expression) {
    AdmissibleWord out;
    std::size_t    n = expression.size();
    if (n == 0) {
      return out;
    }
    if (n == 1) {
      out.pieces.push_back({PieceKind::h, {expression[0], 0, 0}});
    } else {
      out.pieces.push_back({PieceKind::a, {expression[0], expression[1], 0}});
      for (std::size_t i = 1; i + 1 < n; ++i) {
        out.pieces.push_back(
            {PieceKind::m, {expression[i - 1], expression[i], expression[i + 1]}});
      }
      out.pieces.push_back(
          {PieceKind::b, {expression[n - 2], expression[n - 1], 0}});
    }
    LetterString letters;
    for (auto const& p : out.pieces) {
      Word const& w = sigma.word(p);
      letters.insert(letters.end(), w.begin(), w.end());
    }
    out.underlying = Word::reduce(letters);
    return out;
  }

  AdmissibleWord admissible_factorization(SubgroupGraph const& g,
                                          SpanningTree const&  tree,
                                          PieceAlphabet const& sigma,
                                          Word const&          c) {
    if (c.empty()) {
      throw Error(ErrorCode::identity_word,
                  "the identity has no admissible factorisation");
    }
    auto expression = generator_expression(g, tree, sigma.basis(), c);
    if (!expression) {
      throw Error(ErrorCode::not_in_subgroup, "word is not in the subgroup");
    }
    return admissible_word(sigma, *expression);
  }

  NielsenReport validate_nielsen(NielsenBasis const& basis,
                                 Alphabet const&     alphabet) {
    NielsenReport report;
    report.violations = nielsen_property_violations(basis, alphabet);
    return report;
  }

  NielsenReport validate_nielsen(SubgroupGraph const& g,
                                 SpanningTree const&  tree,
                                 NielsenBasis const&  basis,
                                 Alphabet const&      alphabet,
                                 std::size_t          transversal_length) {
    NielsenReport report = validate_nielsen(basis, alphabet);
    for (Word const& s : schreier_transversal(g, tree, transversal_length)) {
      Word f = s.inverse();
      for (std::size_t i = 1; i <= 2 * basis.size(); ++i) {
        std::size_t c = cancellation(f, basis.at(i).h);
        report.max_cancellation = std::max(report.max_cancellation, c);
        ++report.checked;
        if (c > basis.M()) {
          report.violations.push_back(
              "cn(" + alphabet.format(f) + ", " + alphabet.format(basis.at(i).h)
              + ") = " + std::to_string(c) + " exceeds M = "
              + std::to_string(basis.M()));
        }
      }
    }
    return report;
  }

}  // namespace coset_forge
