#ifndef COSET_FORGE_STALLINGS_HPP_
#define COSET_FORGE_STALLINGS_HPP_

// Stallings subgroup graphs: folding, membership, geodesic spanning trees,
// Schreier transversals, Nielsen bases, pullbacks and conjugates.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coset_forge/word.hpp"

namespace coset_forge {

  inline constexpr std::uint32_t no_vertex
      = std::numeric_limits<std::uint32_t>::max();

  //! A positively oriented edge source --x_generator--> target.
  struct Edge {
    std::uint32_t source;
    std::uint32_t generator;
    std::uint32_t target;

    auto operator<=>(Edge const&) const = default;
  };

  //! A folded labelled graph stored as a partial transition table indexed by
  //! (vertex, letter code). Reading x^-1 walks an x-edge backwards.
  class LabeledGraph {
   public:
    LabeledGraph() = default;
    LabeledGraph(std::size_t rank, std::size_t vertex_count,
                 std::vector<Edge> edges);

    [[nodiscard]] std::size_t rank() const noexcept {
      return _rank;
    }
    [[nodiscard]] std::size_t vertex_count() const noexcept {
      return _vertex_count;
    }
    [[nodiscard]] std::span<Edge const> edges() const noexcept {
      return _edges;
    }
    [[nodiscard]] std::uint32_t next(std::uint32_t v, Letter x) const noexcept {
      return _table[v * 2 * _rank + x.code()];
    }
    //! End vertex of the path reading w from v, or no_vertex.
    [[nodiscard]] std::uint32_t read(std::uint32_t v, Word const& w) const;
    //! Number of letters of w readable from v, and the vertex reached.
    [[nodiscard]] std::pair<std::size_t, std::uint32_t> read_prefix(
        std::uint32_t v, Word const& w) const;
    [[nodiscard]] std::size_t degree(std::uint32_t v) const;

    bool operator==(LabeledGraph const&) const = default;

   private:
    std::size_t                _rank         = 0;
    std::size_t                _vertex_count = 0;
    std::vector<Edge>          _edges;
    std::vector<std::uint32_t> _table;
  };

  //! The core Stallings graph of a subgroup, rooted at vertex 0. Vertices
  //! are numbered in breadth-first order from the basepoint exploring
  //! letters a < A < b < B < ..., so two graphs of the same subgroup compare
  //! equal.
  class SubgroupGraph {
   public:
    //! Graph of the trivial subgroup.
    explicit SubgroupGraph(std::size_t rank);

    [[nodiscard]] std::size_t rank() const noexcept {
      return _graph.rank();
    }
    [[nodiscard]] std::uint32_t basepoint() const noexcept {
      return 0;
    }
    [[nodiscard]] std::size_t vertex_count() const noexcept {
      return _graph.vertex_count();
    }
    [[nodiscard]] std::size_t edge_count() const noexcept {
      return _graph.edges().size();
    }
    [[nodiscard]] std::span<Edge const> edges() const noexcept {
      return _graph.edges();
    }
    [[nodiscard]] std::uint32_t next(std::uint32_t v, Letter x) const noexcept {
      return _graph.next(v, x);
    }
    [[nodiscard]] LabeledGraph const& graph() const noexcept {
      return _graph;
    }
    //! E - V + 1.
    [[nodiscard]] std::size_t subgroup_rank() const noexcept {
      return edge_count() + 1 - vertex_count();
    }
    [[nodiscard]] bool is_trivial() const noexcept {
      return edge_count() == 0;
    }

    bool operator==(SubgroupGraph const&) const = default;

   private:
    friend class GraphBuilder;
    explicit SubgroupGraph(LabeledGraph graph) : _graph(std::move(graph)) {}

    LabeledGraph _graph;
  };

  //! Multigraph under construction, folded with union-find and a worklist of
  //! vertices whose incident arrows changed. Merges keep the smaller id.
  class GraphBuilder {
   public:
    explicit GraphBuilder(std::size_t rank);

    std::uint32_t add_vertex();
    void          add_edge(std::uint32_t source, std::uint32_t generator,
                           std::uint32_t target);
    //! Adds a fresh path spelling w starting at `from`; returns its end.
    std::uint32_t add_path(std::uint32_t from, Word const& w);
    //! Adds a closed path spelling w at `at`.
    void add_loop(std::uint32_t at, Word const& w);
    void add_graph(LabeledGraph const& g, std::uint32_t offset_base = 0);

    void          fold();
    std::uint32_t find(std::uint32_t v);

    //! Folds and returns the folded graph renumbered breadth-first from
    //! `root`, keeping only the component of `root`. `marks` are rewritten
    //! to their new ids (no_vertex if unreachable).
    LabeledGraph snapshot(std::uint32_t root, std::vector<std::uint32_t>& marks);
    //! Folds, trims to the core with respect to `basepoint`, canonicalises.
    SubgroupGraph finish(std::uint32_t basepoint);

   private:
    struct Arrow {
      Letter        letter;
      std::uint32_t target;
    };
    void merge(std::uint32_t u, std::uint32_t v);

    std::size_t                     _rank;
    std::vector<std::uint32_t>      _parent;
    std::vector<std::vector<Arrow>> _arrows;
    std::vector<std::uint32_t>      _worklist;
  };

  //! Core Stallings graph of <generators>.
  SubgroupGraph fold(std::span<Word const> generators, Alphabet const& alphabet);
  SubgroupGraph fold(std::span<Word const> generators, std::size_t rank);

  //! w labels a reduced closed path at the basepoint.
  bool accepts(SubgroupGraph const& g, Word const& w);

  struct SpanningTree {
    //! parent[root] == no_vertex.
    std::vector<std::uint32_t> parent;
    //! Letter read from parent[v] to v.
    std::vector<Letter>      via;
    std::vector<std::size_t> depth;

    //! Tree word from the root to v.
    [[nodiscard]] Word path(std::uint32_t v) const;
    [[nodiscard]] bool is_tree_edge(Edge const& e) const;
  };

  //! Breadth-first tree from the basepoint, exploring letters in the order
  //! a < A < b < B < ...
  SpanningTree geodesic_spanning_tree(SubgroupGraph const& g);
  SpanningTree geodesic_spanning_tree(LabeledGraph const& g, std::uint32_t root);

  //! True if `tree` spans g via real edges and every tree path is geodesic.
  bool is_geodesic_tree(LabeledGraph const& g, std::uint32_t root,
                        SpanningTree const& tree);

  //! h = s1 o mu o s2^-1 with no cancellation.
  struct NielsenGenerator {
    Word   h;
    Word   s1;
    Letter mu;
    Word   s2;

    [[nodiscard]] std::size_t central_position() const noexcept {
      return s1.length();
    }
    [[nodiscard]] NielsenGenerator inverse() const;
  };

  class NielsenBasis {
   public:
    NielsenBasis() = default;
    NielsenBasis(std::size_t rank, std::vector<NielsenGenerator> generators);

    //! Splits each word at its middle letter (position floor(l/2)); used for
    //! generating sets that do not come from a spanning tree.
    static NielsenBasis from_words(std::span<Word const> words,
                                   std::size_t           rank);

    [[nodiscard]] std::size_t ambient_rank() const noexcept {
      return _rank;
    }
    //! r, the number of generators.
    [[nodiscard]] std::size_t size() const noexcept {
      return _generators.size();
    }
    [[nodiscard]] std::span<NielsenGenerator const> generators() const noexcept {
      return _generators;
    }
    //! 1-based index over Y and Y^-1: indices r+1..2r are the inverses of
    //! 1..r.
    [[nodiscard]] NielsenGenerator const& at(std::size_t index) const;
    [[nodiscard]] std::size_t inverse_index(std::size_t index) const noexcept {
      return index > size() ? index - size() : index + size();
    }
    [[nodiscard]] std::vector<Word> words() const;

    //! floor(max l(h) / 2) + 1.
    [[nodiscard]] std::uint64_t M() const noexcept {
      return _M;
    }
    //! Number of elements in the ball of radius 2M in F(X).
    [[nodiscard]] std::uint64_t p() const noexcept {
      return _p;
    }
    //! 2pM.
    [[nodiscard]] std::uint64_t k() const noexcept {
      return _k;
    }

   private:
    std::size_t                   _rank = 0;
    std::vector<NielsenGenerator> _generators;
    std::vector<NielsenGenerator> _all;
    std::uint64_t                 _M = 1;
    std::uint64_t                 _p = 1;
    std::uint64_t                 _k = 2;
  };

  //! Size of the ball of radius `radius` in the free group of the given
  //! rank, saturating at the largest uint64.
  std::uint64_t ball_size(std::size_t rank, std::uint64_t radius);

  //! Violations of the three Nielsen properties: the decomposition and the
  //! |l(s1) - l(s2)| <= 1 condition; survival of central letters in
  //! admissible pairs; survival of the middle central letter in admissible
  //! triples. Empty means the basis is Nielsen.
  std::vector<std::string> nielsen_property_violations(NielsenBasis const& b,
                                                       Alphabet const& alphabet);

  //! One generator t(u) x t(v)^-1 per non-tree edge u --x--> v, sorted in
  //! shortlex order. Throws NotGeodesic or NielsenViolation.
  NielsenBasis nielsen_basis(SubgroupGraph const& g, SpanningTree const& tree);
  NielsenBasis nielsen_basis(SubgroupGraph const& g);

  //! Basepoint component of the pullback, trimmed to the core.
  SubgroupGraph intersect_graphs(SubgroupGraph const& g1,
                                 SubgroupGraph const& g2);

  //! Graph of f^-1 C f, obtained by attaching a path spelling f at the
  //! basepoint, moving the basepoint to its end and refolding.
  SubgroupGraph conjugate_graph(SubgroupGraph const& g, Word const& f);

  //! The Y-word of c in C, read along non-tree edges of the spanning tree:
  //! entry i is the 1-based index of the generator (r + j for inverses) in
  //! the order produced by nielsen_basis. nullopt if c is not in C.
  std::optional<std::vector<std::size_t>> generator_expression(
      SubgroupGraph const& g, SpanningTree const& tree,
      NielsenBasis const& basis, Word const& c);

  //! Geodesic Schreier transversal up to length max_length, in shortlex
  //! order: tree words of g, then words leaving g at a vertex v through a
  //! missing letter x, continued along the hanging Cayley tree.
  std::vector<Word> schreier_transversal(SubgroupGraph const& g,
                                         SpanningTree const&  tree,
                                         std::size_t          max_length);

  //! Transversal element of the right coset C w.
  Word coset_representative(SubgroupGraph const& g, SpanningTree const& tree,
                            Word const& w);

}  // namespace coset_forge

#endif  // COSET_FORGE_STALLINGS_HPP_
