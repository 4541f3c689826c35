#include "coset_forge/stallings.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "coset_forge/error.hpp"

namespace coset_forge {

  ////////////////////////////////////////////////////////////////////////
  // LabeledGraph
  ////////////////////////////////////////////////////////////////////////

  LabeledGraph::LabeledGraph(std::size_t rank, std::size_t vertex_count,
                             std::vector<Edge> edges)
      : _rank(rank),
        _vertex_count(vertex_count),
        _edges(std::move(edges)),
        _table(vertex_count * 2 * rank, no_vertex) {
    std::sort(_edges.begin(), _edges.end());
    _edges.erase(std::unique(_edges.begin(), _edges.end()), _edges.end());
    for (auto const& e : _edges) {
      auto x = Letter::generator(e.generator);
      assert(_table[e.source * 2 * _rank + x.code()] == no_vertex);
      assert(_table[e.target * 2 * _rank + x.inverse().code()] == no_vertex);
      _table[e.source * 2 * _rank + x.code()]           = e.target;
      _table[e.target * 2 * _rank + x.inverse().code()] = e.source;
    }
  }

  std::uint32_t LabeledGraph::read(std::uint32_t v, Word const& w) const {
    for (Letter x : w) {
      v = next(v, x);
      if (v == no_vertex) {
        return no_vertex;
      }
    }
    return v;
  }

  std::pair<std::size_t, std::uint32_t> LabeledGraph::read_prefix(
      std::uint32_t v, Word const& w) const {
    std::size_t i = 0;
    for (; i < w.length(); ++i) {
      auto u = next(v, w[i]);
      if (u == no_vertex) {
        break;
      }
      v = u;
    }
    return {i, v};
  }

  std::size_t LabeledGraph::degree(std::uint32_t v) const {
    std::size_t d = 0;
    for (std::uint32_t c = 0; c < 2 * _rank; ++c) {
      d += next(v, Letter(c)) != no_vertex;
    }
    return d;
  }

  SubgroupGraph::SubgroupGraph(std::size_t rank) : _graph(rank, 1, {}) {}

  ////////////////////////////////////////////////////////////////////////
  // GraphBuilder
  ////////////////////////////////////////////////////////////////////////

  GraphBuilder::GraphBuilder(std::size_t rank) : _rank(rank) {}

  std::uint32_t GraphBuilder::add_vertex() {
    auto v = static_cast<std::uint32_t>(_parent.size());
    _parent.push_back(v);
    _arrows.emplace_back();
    return v;
  }

  void GraphBuilder::add_edge(std::uint32_t source, std::uint32_t generator,
                              std::uint32_t target) {
    auto x = Letter::generator(generator);
    source = find(source);
    target = find(target);
    _arrows[source].push_back({x, target});
    _arrows[target].push_back({x.inverse(), source});
    _worklist.push_back(source);
    _worklist.push_back(target);
  }

  std::uint32_t GraphBuilder::add_path(std::uint32_t from, Word const& w) {
    std::uint32_t v = from;
    for (Letter x : w) {
      std::uint32_t u = add_vertex();
      if (x.is_inverse()) {
        add_edge(u, x.index(), v);
      } else {
        add_edge(v, x.index(), u);
      }
      v = u;
    }
    return v;
  }

  void GraphBuilder::add_loop(std::uint32_t at, Word const& w) {
    if (w.empty()) {
      return;
    }
    std::uint32_t end = add_path(at, w.prefix(w.length() - 1));
    Letter        x   = w.back();
    if (x.is_inverse()) {
      add_edge(at, x.index(), end);
    } else {
      add_edge(end, x.index(), at);
    }
  }

  void GraphBuilder::add_graph(LabeledGraph const& g,
                               std::uint32_t       offset_base) {
    while (_parent.size() < offset_base + g.vertex_count()) {
      add_vertex();
    }
    for (auto const& e : g.edges()) {
      add_edge(offset_base + e.source, e.generator, offset_base + e.target);
    }
  }

  std::uint32_t GraphBuilder::find(std::uint32_t v) {
    std::uint32_t r = v;
    while (_parent[r] != r) {
      r = _parent[r];
    }
    while (_parent[v] != r) {
      std::uint32_t next = _parent[v];
      _parent[v]         = r;
      v                  = next;
    }
    return r;
  }

  void GraphBuilder::merge(std::uint32_t u, std::uint32_t v) {
    u = find(u);
    v = find(v);
    if (u == v) {
      return;
    }
    if (v < u) {
      std::swap(u, v);
    }
    _parent[v] = u;
    auto& into = _arrows[u];
    auto& from = _arrows[v];
    into.insert(into.end(), from.begin(), from.end());
    from.clear();
    from.shrink_to_fit();
    _worklist.push_back(u);
  }

  void GraphBuilder::fold() {
    std::vector<std::uint32_t> seen(2 * _rank, no_vertex);
    while (!_worklist.empty()) {
      std::uint32_t v = _worklist.back();
      _worklist.pop_back();
      if (find(v) != v) {
        continue;
      }
      std::fill(seen.begin(), seen.end(), no_vertex);
      auto&         arrows = _arrows[v];
      std::uint32_t clash_a = no_vertex, clash_b = no_vertex;
      std::size_t   kept = 0;
      for (std::size_t i = 0; i < arrows.size(); ++i) {
        Arrow a  = arrows[i];
        a.target = find(a.target);
        auto& s  = seen[a.letter.code()];
        if (s == no_vertex) {
          s              = a.target;
          arrows[kept++] = a;
        } else if (s != a.target) {
          clash_a = s;
          clash_b = a.target;
          arrows[kept++] = a;
        }
        // else a parallel duplicate, dropped
      }
      arrows.resize(kept);
      if (clash_a != no_vertex) {
        // Two arrows with the same label leave v: identify their ends and
        // look at v again, since its arrows now point to the merged vertex.
        _worklist.push_back(v);
        merge(clash_a, clash_b);
      }
    }
  }

  LabeledGraph GraphBuilder::snapshot(std::uint32_t               root,
                                      std::vector<std::uint32_t>& marks) {
    fold();
    root = find(root);
    std::vector<std::uint32_t> renumber(_parent.size(), no_vertex);
    std::vector<std::uint32_t> order{root};
    renumber[root] = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
      std::uint32_t v = order[head];
      // Folded: at most one target per letter.
      std::vector<std::uint32_t> out(2 * _rank, no_vertex);
      for (auto const& a : _arrows[v]) {
        out[a.letter.code()] = find(a.target);
      }
      for (std::uint32_t c = 0; c < 2 * _rank; ++c) {
        std::uint32_t u = out[c];
        if (u != no_vertex && renumber[u] == no_vertex) {
          renumber[u] = static_cast<std::uint32_t>(order.size());
          order.push_back(u);
        }
      }
    }
    std::vector<Edge> edges;
    for (std::uint32_t v : order) {
      for (auto const& a : _arrows[v]) {
        if (!a.letter.is_inverse()) {
          edges.push_back({renumber[v], a.letter.index(),
                           renumber[find(a.target)]});
        }
      }
    }
    for (auto& m : marks) {
      m = m == no_vertex ? no_vertex : renumber[find(m)];
    }
    return LabeledGraph(_rank, order.size(), std::move(edges));
  }

  SubgroupGraph GraphBuilder::finish(std::uint32_t basepoint) {
    std::vector<std::uint32_t> marks;
    LabeledGraph               g = snapshot(basepoint, marks);
    // Trim hanging trees: remove degree one vertices other than the
    // basepoint (now 0) until none remain.
    std::vector<std::size_t> degree(g.vertex_count(), 0);
    for (auto const& e : g.edges()) {
      degree[e.source]++;
      degree[e.target]++;
    }
    std::vector<bool>          removed(g.vertex_count(), false);
    std::vector<std::uint32_t> queue;
    for (std::uint32_t v = 1; v < g.vertex_count(); ++v) {
      if (degree[v] <= 1) {
        queue.push_back(v);
      }
    }
    while (!queue.empty()) {
      std::uint32_t v = queue.back();
      queue.pop_back();
      if (removed[v]) {
        continue;
      }
      removed[v] = true;
      for (std::uint32_t c = 0; c < 2 * _rank; ++c) {
        std::uint32_t u = g.next(v, Letter(c));
        if (u != no_vertex && !removed[u]) {
          if (--degree[u] <= 1 && u != 0) {
            queue.push_back(u);
          }
        }
      }
    }
    GraphBuilder core(_rank);
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
      core.add_vertex();
    }
    for (auto const& e : g.edges()) {
      if (!removed[e.source] && !removed[e.target]) {
        core.add_edge(e.source, e.generator, e.target);
      }
    }
    return SubgroupGraph(core.snapshot(0, marks));
  }

  ////////////////////////////////////////////////////////////////////////
  // Folding and membership
  ////////////////////////////////////////////////////////////////////////

  SubgroupGraph fold(std::span<Word const> generators, std::size_t rank) {
    GraphBuilder  builder(rank);
    std::uint32_t base = builder.add_vertex();
    for (auto const& h : generators) {
      builder.add_loop(base, h);
    }
    return builder.finish(base);
  }

  SubgroupGraph fold(std::span<Word const> generators,
                     Alphabet const&       alphabet) {
    return fold(generators, alphabet.rank());
  }

  bool accepts(SubgroupGraph const& g, Word const& w) {
    return g.graph().read(g.basepoint(), w) == g.basepoint();
  }

  ////////////////////////////////////////////////////////////////////////
  // Spanning trees
  ////////////////////////////////////////////////////////////////////////

  Word SpanningTree::path(std::uint32_t v) const {
    LetterString letters;
    while (parent[v] != no_vertex) {
      letters.push_back(via[v]);
      v = parent[v];
    }
    std::reverse(letters.begin(), letters.end());
    return Word::reduce(letters);
  }

  bool SpanningTree::is_tree_edge(Edge const& e) const {
    auto x = Letter::generator(e.generator);
    if (e.source == e.target) {
      return false;
    }
    return (parent[e.target] == e.source && via[e.target] == x)
           || (parent[e.source] == e.target && via[e.source] == x.inverse());
  }

  SpanningTree geodesic_spanning_tree(LabeledGraph const& g,
                                      std::uint32_t       root) {
    SpanningTree t;
    t.parent.assign(g.vertex_count(), no_vertex);
    t.via.assign(g.vertex_count(), Letter());
    t.depth.assign(g.vertex_count(), 0);
    std::vector<bool>          seen(g.vertex_count(), false);
    std::deque<std::uint32_t> queue{root};
    seen[root] = true;
    while (!queue.empty()) {
      std::uint32_t v = queue.front();
      queue.pop_front();
      for (std::uint32_t c = 0; c < 2 * g.rank(); ++c) {
        std::uint32_t u = g.next(v, Letter(c));
        if (u != no_vertex && !seen[u]) {
          seen[u]     = true;
          t.parent[u] = v;
          t.via[u]    = Letter(c);
          t.depth[u]  = t.depth[v] + 1;
          queue.push_back(u);
        }
      }
    }
    return t;
  }

  SpanningTree geodesic_spanning_tree(SubgroupGraph const& g) {
    return geodesic_spanning_tree(g.graph(), g.basepoint());
  }

  bool is_geodesic_tree(LabeledGraph const& g, std::uint32_t root,
                        SpanningTree const& tree) {
    std::size_t n = g.vertex_count();
    if (tree.parent.size() != n || tree.via.size() != n
        || tree.parent[root] != no_vertex) {
      return false;
    }
    auto bfs = geodesic_spanning_tree(g, root);
    for (std::uint32_t v = 0; v < n; ++v) {
      if (v == root) {
        continue;
      }
      if (tree.parent[v] == no_vertex || tree.parent[v] >= n
          || g.next(tree.parent[v], tree.via[v]) != v) {
        return false;
      }
      // Walking up must reach the root in exactly the BFS distance.
      std::size_t   steps = 0;
      std::uint32_t u     = v;
      while (u != root && steps <= n) {
        u = tree.parent[u];
        ++steps;
        if (u == no_vertex) {
          return false;
        }
      }
      if (u != root || steps != bfs.depth[v]) {
        return false;
      }
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Nielsen bases
  ////////////////////////////////////////////////////////////////////////

  NielsenGenerator NielsenGenerator::inverse() const {
    return {h.inverse(), s2, mu.inverse(), s1};
  }

  std::uint64_t ball_size(std::size_t rank, std::uint64_t radius) {
    constexpr std::uint64_t cap    = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t           count  = 1;
    std::uint64_t           sphere = 2 * rank;
    for (std::uint64_t r = 1; r <= radius; ++r) {
      if (count > cap - sphere) {
        return cap;
      }
      count += sphere;
      std::uint64_t factor = 2 * rank - 1;
      sphere = (factor != 0 && sphere > cap / factor) ? cap : sphere * factor;
    }
    return count;
  }

  NielsenBasis::NielsenBasis(std::size_t                   rank,
                             std::vector<NielsenGenerator> generators)
      : _rank(rank), _generators(std::move(generators)) {
    _all = _generators;
    for (auto const& g : _generators) {
      _all.push_back(g.inverse());
    }
    std::size_t longest = 0;
    for (auto const& g : _generators) {
      longest = std::max(longest, g.h.length());
    }
    _M = longest / 2 + 1;
    _p = ball_size(rank, 2 * _M);
    constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
    _k = _p > cap / (2 * _M) ? cap : 2 * _p * _M;
  }

  NielsenBasis NielsenBasis::from_words(std::span<Word const> words,
                                        std::size_t           rank) {
    std::vector<NielsenGenerator> gens;
    for (auto const& h : words) {
      if (h.empty()) {
        throw Error(ErrorCode::invalid_argument,
                    "a Nielsen generator cannot be trivial");
      }
      std::size_t mid = h.length() / 2;
      gens.push_back({h, h.prefix(mid), h[mid],
                      h.suffix(h.length() - mid - 1).inverse()});
    }
    return NielsenBasis(rank, std::move(gens));
  }

  NielsenGenerator const& NielsenBasis::at(std::size_t index) const {
    if (index == 0 || index > _all.size()) {
      throw Error(ErrorCode::invalid_argument,
                  "generator index " + std::to_string(index) + " outside 1.."
                      + std::to_string(_all.size()));
    }
    return _all[index - 1];
  }

  std::vector<Word> NielsenBasis::words() const {
    std::vector<Word> out;
    for (auto const& g : _generators) {
      out.push_back(g.h);
    }
    return out;
  }

  std::vector<std::string> nielsen_property_violations(
      NielsenBasis const& b, Alphabet const& alphabet) {
    std::vector<std::string> found;
    std::size_t const        n = 2 * b.size();
    auto                     name = [&](std::size_t i) {
      return "h" + std::to_string(i) + "=" + alphabet.format(b.at(i).h);
    };
    for (std::size_t i = 1; i <= n; ++i) {
      auto const& g = b.at(i);
      std::array<Word, 3> parts{g.s1, Word::letter(g.mu), g.s2.inverse()};
      if (multiply(parts) != g.h || cn(parts) != 0) {
        found.push_back("(i) " + name(i) + " is not s1 o mu o s2^-1");
      }
      auto d1 = g.s1.length(), d2 = g.s2.length();
      if ((d1 > d2 ? d1 - d2 : d2 - d1) > 1) {
        found.push_back("(i) " + name(i) + " has |l(s1) - l(s2)| > 1");
      }
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= n; ++j) {
        if (b.inverse_index(i) == j) {
          continue;
        }
        std::array<Word, 2> pair{b.at(i).h, b.at(j).h};
        auto                alive = surviving_letters(pair);
        if (!alive[0][b.at(i).central_position()]
            || !alive[1][b.at(j).central_position()]) {
          found.push_back("(ii) central letter cancels in " + name(i) + " * "
                          + name(j));
        }
      }
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= n; ++j) {
        if (b.inverse_index(i) == j) {
          continue;
        }
        for (std::size_t k = 1; k <= n; ++k) {
          if (b.inverse_index(j) == k) {
            continue;
          }
          std::array<Word, 3> triple{b.at(i).h, b.at(j).h, b.at(k).h};
          auto                alive = surviving_letters(triple);
          if (!alive[1][b.at(j).central_position()]) {
            found.push_back("(iii) central letter of " + name(j)
                            + " cancels in " + name(i) + " * " + name(j) + " * "
                            + name(k));
          }
        }
      }
    }
    return found;
  }

  NielsenBasis nielsen_basis(SubgroupGraph const& g, SpanningTree const& tree) {
    if (!is_geodesic_tree(g.graph(), g.basepoint(), tree)) {
      throw Error(ErrorCode::not_geodesic,
                  "spanning tree is not a geodesic tree of the graph");
    }
    std::vector<NielsenGenerator> gens;
    for (auto const& e : g.edges()) {
      if (tree.is_tree_edge(e)) {
        continue;
      }
      auto                x = Letter::generator(e.generator);
      Word                s1 = tree.path(e.source);
      Word                s2 = tree.path(e.target);
      std::array<Word, 3> parts{s1, Word::letter(x), s2.inverse()};
      gens.push_back({multiply(parts), s1, x, s2});
    }
    std::sort(gens.begin(), gens.end(), [](auto const& u, auto const& v) {
      return u.h < v.h;
    });
    NielsenBasis basis(g.rank(), std::move(gens));
    auto         violations
        = nielsen_property_violations(basis, Alphabet(g.rank()));
    if (!violations.empty()) {
      throw Error(ErrorCode::nielsen_violation, violations.front());
    }
    return basis;
  }

  NielsenBasis nielsen_basis(SubgroupGraph const& g) {
    return nielsen_basis(g, geodesic_spanning_tree(g));
  }

  std::optional<std::vector<std::size_t>> generator_expression(
      SubgroupGraph const& g, SpanningTree const& tree,
      NielsenBasis const& basis, Word const& c) {
    std::map<Edge, std::size_t> index;
    for (auto const& e : g.edges()) {
      if (tree.is_tree_edge(e)) {
        continue;
      }
      Word s1 = tree.path(e.source), s2 = tree.path(e.target);
      std::array<Word, 3> parts{s1, Word::letter(Letter::generator(e.generator)),
                                s2.inverse()};
      Word h = multiply(parts);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis.generators()[i].h == h) {
          index[e] = i + 1;
          break;
        }
      }
    }
    std::vector<std::size_t> out;
    std::uint32_t            v = g.basepoint();
    for (Letter x : c) {
      std::uint32_t u = g.next(v, x);
      if (u == no_vertex) {
        return std::nullopt;
      }
      Edge e = x.is_inverse() ? Edge{u, x.index(), v} : Edge{v, x.index(), u};
      if (auto it = index.find(e); it != index.end()) {
        out.push_back(x.is_inverse() ? it->second + basis.size() : it->second);
      }
      v = u;
    }
    if (v != g.basepoint()) {
      return std::nullopt;
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Products and conjugates
  ////////////////////////////////////////////////////////////////////////

  SubgroupGraph intersect_graphs(SubgroupGraph const& g1,
                                 SubgroupGraph const& g2) {
    if (g1.rank() != g2.rank()) {
      throw Error(ErrorCode::invalid_argument,
                  "cannot intersect graphs over different alphabets");
    }
    std::size_t const n2 = g2.vertex_count();
    std::map<std::uint64_t, std::uint32_t> ids;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs{{0, 0}};
    ids[0] = 0;
    GraphBuilder builder(g1.rank());
    builder.add_vertex();
    for (std::size_t head = 0; head < pairs.size(); ++head) {
      auto [v1, v2] = pairs[head];
      for (std::uint32_t c = 0; c < 2 * g1.rank(); ++c) {
        Letter x  = Letter(c);
        auto   u1 = g1.next(v1, x), u2 = g2.next(v2, x);
        if (u1 == no_vertex || u2 == no_vertex) {
          continue;
        }
        std::uint64_t key = std::uint64_t(u1) * n2 + u2;
        auto [it, fresh]  = ids.try_emplace(key, 0);
        if (fresh) {
          it->second = builder.add_vertex();
          pairs.emplace_back(u1, u2);
        }
        if (!x.is_inverse()) {
          builder.add_edge(static_cast<std::uint32_t>(head), x.index(),
                           it->second);
        }
      }
    }
    return builder.finish(0);
  }

  SubgroupGraph conjugate_graph(SubgroupGraph const& g, Word const& f) {
    GraphBuilder builder(g.rank());
    builder.add_graph(g.graph());
    std::uint32_t end = builder.add_path(g.basepoint(), f);
    return builder.finish(end);
  }

  ////////////////////////////////////////////////////////////////////////
  // Schreier transversals
  ////////////////////////////////////////////////////////////////////////

  namespace {
    void extend_free(Word const& prefix, Letter last, std::size_t rank,
                     std::size_t max_length, std::vector<Word>& out) {
      if (prefix.length() >= max_length) {
        return;
      }
      for (std::uint32_t c = 0; c < 2 * rank; ++c) {
        Letter x(c);
        if (x == last.inverse()) {
          continue;
        }
        Word next = multiply(prefix, Word::letter(x));
        out.push_back(next);
        extend_free(next, x, rank, max_length, out);
      }
    }
  }  // namespace

  std::vector<Word> schreier_transversal(SubgroupGraph const& g,
                                         SpanningTree const&  tree,
                                         std::size_t          max_length) {
    std::vector<Word> out;
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
      Word t = tree.path(v);
      if (t.length() <= max_length) {
        out.push_back(t);
      }
      if (t.length() >= max_length) {
        continue;
      }
      for (std::uint32_t c = 0; c < 2 * g.rank(); ++c) {
        Letter x(c);
        if (g.next(v, x) != no_vertex) {
          continue;
        }
        Word leaving = multiply(t, Word::letter(x));
        out.push_back(leaving);
        extend_free(leaving, x, g.rank(), max_length, out);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  Word coset_representative(SubgroupGraph const& g, SpanningTree const& tree,
                            Word const& w) {
    auto [read, v] = g.graph().read_prefix(g.basepoint(), w);
    return multiply(tree.path(v), w.suffix(w.length() - read));
  }

}  // namespace coset_forge
