#ifndef COSET_FORGE_COSET_HPP_
#define COSET_FORGE_COSET_HPP_

// Double cosets CfC of a finitely generated subgroup C of F(X).
//
// C_f = C n f^-1 C f. The coset is essential when C_f is nontrivial and
// C is f-malnormal otherwise. Elements of C are also handled as Y-words:
// sequences of 1-based indices into the Nielsen basis Y u Y^-1, index r + i
// standing for h_i^-1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coset_forge/automaton.hpp"
#include "coset_forge/pieces.hpp"
#include "coset_forge/stallings.hpp"
#include "coset_forge/word.hpp"

namespace coset_forge {

  using YWord = std::vector<std::size_t>;

  //! A subgroup with its graph, geodesic spanning tree and Nielsen basis.
  class Subgroup {
   public:
    explicit Subgroup(SubgroupGraph graph);
    Subgroup(std::span<Word const> generators, std::size_t rank);

    [[nodiscard]] std::size_t rank() const noexcept {
      return _graph.rank();
    }
    [[nodiscard]] SubgroupGraph const& graph() const noexcept {
      return _graph;
    }
    [[nodiscard]] SpanningTree const& tree() const noexcept {
      return _tree;
    }
    [[nodiscard]] NielsenBasis const& basis() const noexcept {
      return _basis;
    }
    [[nodiscard]] bool contains(Word const& w) const {
      return accepts(_graph, w);
    }
    //! Y-word of c, or nullopt if c is not in C.
    [[nodiscard]] std::optional<YWord> expression(Word const& c) const;
    //! Product of the generators named by y.
    [[nodiscard]] Word evaluate(std::span<std::size_t const> y) const;
    //! Canonical DFA of the reduced words of C.
    [[nodiscard]] Automaton const& automaton() const noexcept {
      return _automaton;
    }

   private:
    SubgroupGraph _graph;
    SpanningTree  _tree;
    NielsenBasis  _basis;
    Automaton     _automaton;
  };

  //! Letter of the rank-r alphabet Y that stands for index i, and back.
  Letter      y_letter(std::size_t index, std::size_t r);
  std::size_t y_index(Letter x, std::size_t r);

  //! Graph of C_f = C n f^-1 C f.
  SubgroupGraph stabilizer(SubgroupGraph const& c, Word const& f);

  //! Throws RepresentativeInSubgroup if f is in C.
  bool is_f_malnormal(Subgroup const& c, Word const& f);

  //! Pairs (x, y) in C x C with x g = f y.
  struct SolutionSet {
    enum class Kind { empty, singleton, parametrized };

    Kind kind = Kind::empty;
    Word f;
    Word c1;
    Word c2;
    //! C_f. Every solution is (f z f^-1 c1, z c2) for a unique z in C_f.
    SubgroupGraph parameter;

    [[nodiscard]] std::pair<Word, Word> pair(Word const& z) const;
    //! Solutions for every z in C_f of length at most max_length, ordered
    //! by z in shortlex order.
    [[nodiscard]] std::vector<std::pair<Word, Word>> enumerate(
        std::size_t max_length) const;
  };

  //! Solutions of x f = f y. Throws RepresentativeInSubgroup.
  SolutionSet solve_uniform(Subgroup const& c, Word const& f);
  //! Solutions of x g = f y, found by a breadth-first search for
  //! d in C n f^-1 C g. Throws RepresentativeInSubgroup.
  SolutionSet solve_equation(Subgroup const& c, Word const& g, Word const& f);

  //! g in CfC via the search of solve_equation; accepts f or g in C.
  bool in_double_coset(Subgroup const& c, Word const& f, Word const& g);

  //! Shortlex least word of CfC.
  Word minimal_representative(Subgroup const& c, Word const& f);

  struct DoubleCoset {
    Word          f;
    SubgroupGraph stabilizer;
    bool          essential = false;
    Word          minimal_rep;
  };

  DoubleCoset double_coset(Subgroup const& c, Word const& f);

  //! Every essential double coset, each once, ordered by minimal
  //! representative. Candidates are the reduced products uv of two subwords
  //! u, v of generators in Y u Y^-1.
  std::vector<DoubleCoset> essential_cosets(Subgroup const& c);

  //! The candidate representatives scanned by essential_cosets, shortlex.
  std::vector<Word> essential_candidates(NielsenBasis const& basis);

  //! d = t1 o mu o t2^-1 over Y with t1, t2 tree words of the relative
  //! transversal, and the matching split of the admissible X-word of d.
  struct CentralDecomposition {
    YWord                 expression;
    std::size_t           central = 0;
    std::vector<PieceRef> prefix;
    PieceRef              centre{};
    std::vector<PieceRef> suffix;
    Word                  prefix_word;
    Word                  centre_word;
    Word                  suffix_word;
  };

  //! Schreier transversal of D <= C over the alphabet Y, with the spanning
  //! tree of the graph of D chosen so that every generator of D reads its
  //! central letter along the only non-tree edge of its loop.
  class RelativeTransversal {
   public:
    RelativeTransversal(NielsenBasis basis, SubgroupGraph graph,
                        SpanningTree                      tree,
                        std::vector<CentralDecomposition> decompositions);

    //! Graph of D over Y, of rank r.
    [[nodiscard]] SubgroupGraph const& graph() const noexcept {
      return _graph;
    }
    [[nodiscard]] SpanningTree const& tree() const noexcept {
      return _tree;
    }
    [[nodiscard]] std::span<CentralDecomposition const> decompositions()
        const noexcept {
      return _decompositions;
    }
    //! Tree words, one per vertex of the graph of D, shortlex.
    [[nodiscard]] std::vector<YWord> internal() const;
    //! Representative of the coset D y.
    [[nodiscard]] YWord representative(std::span<std::size_t const> y) const;
    [[nodiscard]] Word  expand(std::span<std::size_t const> y) const;
    //! Reduced X-words of the whole (infinite) transversal.
    [[nodiscard]] Automaton automaton() const;

   private:
    NielsenBasis                      _basis;
    SubgroupGraph                     _graph;
    SpanningTree                      _tree;
    std::vector<CentralDecomposition> _decompositions;
  };

  //! Transversal of D = <z> for Y-words z, splitting each z at position
  //! ceil(n / 2) and taking the tree formed by the edges read before and
  //! after the central letters. Throws CentralLetterUnrespectable if those
  //! edges do not form a spanning tree avoiding every central edge.
  RelativeTransversal relative_transversal(NielsenBasis const& basis,
                                           std::span<YWord const> z);
  //! Transversal of a subgroup D <= C given by its graph over X, using a
  //! geodesic tree of the graph of D over Y.
  RelativeTransversal relative_transversal(Subgroup const&      c,
                                           SubgroupGraph const& d);

  struct NormalForm {
    Word c;
    Word t;
    //! Y-word of t when C is not f-malnormal.
    YWord t_expression;

    bool operator==(NormalForm const&) const = default;
  };

  //! g = c f t with c in C and t in C (f-malnormal case) or in the relative
  //! transversal of C_f (essential case). Unique for fixed C, f.
  class CosetNormalizer {
   public:
    //! Throws RepresentativeInSubgroup.
    CosetNormalizer(Subgroup const& c, Word f);

    [[nodiscard]] bool essential() const noexcept {
      return _transversal.has_value();
    }
    [[nodiscard]] RelativeTransversal const& transversal() const {
      return _transversal.value();
    }
    //! Throws NotInCoset.
    [[nodiscard]] NormalForm operator()(Word const& g) const;

   private:
    Subgroup const*                    _c;
    Word                               _f;
    std::optional<RelativeTransversal> _transversal;
  };

  NormalForm normal_form(Subgroup const& c, Word const& f, Word const& g);

  struct DoubleCosetAutomaton {
    Automaton     automaton;
    Word          representative;
    bool          essential = false;
    std::uint64_t k         = 0;
    //! The k-reduced construction and the Benois construction agree.
    bool                     agreed = true;
    std::vector<std::string> findings;
  };

  //! Canonical DFA of the reduced words of CfC. f is first replaced by its
  //! minimal representative; CfC is built as the k-reduced product C.f.C
  //! (f-malnormal) or C.f.T (essential, T the relative transversal of C_f)
  //! and compared with the Benois reduction of C.f.C. On disagreement the
  //! Benois result is returned and a finding recorded. Throws
  //! RepresentativeInSubgroup.
  DoubleCosetAutomaton double_coset_automaton(Subgroup const& c,
                                              Word const&     f);

  //! Membership through the CfC automaton, cross-checked against
  //! solve_equation.
  bool membership(Subgroup const& c, Word const& f, Word const& g);

  struct KReducedReport {
    std::uint64_t seed    = 0;
    Word          f;
    bool          essential = false;
    std::uint64_t M         = 0;
    std::uint64_t p         = 0;
    std::uint64_t k         = 0;
    std::size_t   samples   = 0;
    std::size_t   max_cn    = 0;
    Word          witness_c;
    Word          witness_d;
    bool          violation = false;
    //! Largest cn over samples in which some letter of f survives, which
    //! is bounded by 2M.
    std::size_t max_cn_surviving       = 0;
    std::size_t surviving_samples      = 0;
    bool        surviving_violation    = false;
    std::size_t max_sample_y_length    = 0;

    bool operator==(KReducedReport const&) const = default;
  };

  struct KReducedOptions {
    std::size_t   samples = 1000;
    std::uint64_t seed    = 0;
    //! Longest sampled Y-word; 0 means 2p + 2, capped at max_y_length_cap.
    std::size_t max_y_length     = 0;
    std::size_t max_y_length_cap = 1 << 15;
  };

  //! Samples c in C and d in C (f-malnormal) or in the transversal T of C_f
  //! (essential), with f replaced by its minimal representative, and checks
  //! cn(c, f, d) <= 2pM. Sample i depends only on (seed, i), so the
  //! parallel and serial versions return the same report. Throws
  //! MinimalityViolated if some c f d is shorter than f.
  KReducedReport verify_k_reduced(Subgroup const& c, Word const& f,
                                  KReducedOptions const& options = {});
  KReducedReport verify_k_reduced_serial(Subgroup const& c, Word const& f,
                                         KReducedOptions const& options = {});

  //! max cn(c, f, d) over c, d in C with Y-length at most n, for
  //! n = 1..max_n, by exhaustive enumeration.
  std::vector<std::size_t> cancellation_growth(Subgroup const& c,
                                               Word const&     f,
                                               std::size_t     max_n);

}  // namespace coset_forge

#endif  // COSET_FORGE_COSET_HPP_
