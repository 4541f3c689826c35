#include "coset_forge/coset.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <random>
#include <set>

#include <omp.h>

#include "coset_forge/error.hpp"

namespace coset_forge {

  ////////////////////////////////////////////////////////////////////////
  // Subgroup
  ////////////////////////////////////////////////////////////////////////

  Subgroup::Subgroup(SubgroupGraph graph)
      : _graph(std::move(graph)),
        _tree(geodesic_spanning_tree(_graph)),
        _basis(nielsen_basis(_graph, _tree)),
        _automaton(intersect(from_graph(_graph), reduced_acceptor(rank()))) {}

  Subgroup::Subgroup(std::span<Word const> generators, std::size_t rank)
      : Subgroup(fold(generators, rank)) {}

  std::optional<YWord> Subgroup::expression(Word const& c) const {
    return generator_expression(_graph, _tree, _basis, c);
  }

  Word Subgroup::evaluate(std::span<std::size_t const> y) const {
    LetterString letters;
    for (auto i : y) {
      Word const& h = _basis.at(i).h;
      letters.insert(letters.end(), h.begin(), h.end());
    }
    return Word::reduce(letters);
  }

  Letter y_letter(std::size_t index, std::size_t r) {
    if (index == 0 || index > 2 * r) {
      throw Error(ErrorCode::invalid_argument,
                  "generator index " + std::to_string(index) + " outside 1.."
                      + std::to_string(2 * r));
    }
    return index <= r ? Letter::generator(index - 1)
                      : Letter::generator(index - r - 1, true);
  }

  std::size_t y_index(Letter x, std::size_t r) {
    return x.index() + 1 + (x.is_inverse() ? r : 0);
  }

  namespace {
    Word to_word(std::span<std::size_t const> y, std::size_t r) {
      LetterString letters;
      for (auto i : y) {
        letters.push_back(y_letter(i, r));
      }
      return Word::reduce(letters);
    }

    YWord to_yword(Word const& w, std::size_t r) {
      YWord out;
      for (Letter x : w) {
        out.push_back(y_index(x, r));
      }
      return out;
    }

    void reject_member(Subgroup const& c, Word const& w) {
      if (c.contains(w)) {
        throw Error(ErrorCode::representative_in_subgroup,
                    "representative lies in the subgroup");
      }
    }

    // Some d in C n f^-1 C g, found by a breadth-first search of the
    // product of Gamma_C (from the basepoint) with Gamma_C carrying
    // hanging paths for f and g (from the end of f to the end of g).
    std::optional<Word> find_right_factor(Subgroup const& c, Word const& f,
                                          Word const& g) {
      GraphBuilder builder(c.rank());
      builder.add_graph(c.graph().graph());
      std::vector<std::uint32_t> marks{builder.add_path(0, f),
                                       builder.add_path(0, g)};
      LabeledGraph        h = builder.snapshot(0, marks);
      LabeledGraph const& k = c.graph().graph();
      std::size_t const   n = k.vertex_count();
      auto                id = [&](std::uint32_t u, std::uint32_t v) {
        return static_cast<std::uint64_t>(u) * n + v;
      };
      std::map<std::uint64_t, std::pair<std::uint64_t, Letter>> parent;
      std::uint64_t const start = id(marks[0], 0), goal = id(marks[1], 0);
      std::deque<std::uint64_t> queue{start};
      parent.emplace(start, std::pair{start, Letter()});
      while (!queue.empty() && !parent.contains(goal)) {
        auto s = queue.front();
        queue.pop_front();
        auto u = static_cast<std::uint32_t>(s / n);
        auto v = static_cast<std::uint32_t>(s % n);
        for (std::uint32_t x = 0; x < 2 * c.rank(); ++x) {
          auto u2 = h.next(u, Letter(x)), v2 = k.next(v, Letter(x));
          if (u2 == no_vertex || v2 == no_vertex) {
            continue;
          }
          if (parent.emplace(id(u2, v2), std::pair{s, Letter(x)}).second) {
            queue.push_back(id(u2, v2));
          }
        }
      }
      if (!parent.contains(goal)) {
        return std::nullopt;
      }
      LetterString letters;
      for (auto s = goal; s != start; s = parent[s].first) {
        letters.push_back(parent[s].second);
      }
      std::reverse(letters.begin(), letters.end());
      return Word::reduce(letters);
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Stabilisers and solution sets
  ////////////////////////////////////////////////////////////////////////

  SubgroupGraph stabilizer(SubgroupGraph const& c, Word const& f) {
    return intersect_graphs(c, conjugate_graph(c, f));
  }

  bool is_f_malnormal(Subgroup const& c, Word const& f) {
    reject_member(c, f);
    return stabilizer(c.graph(), f).is_trivial();
  }

  std::pair<Word, Word> SolutionSet::pair(Word const& z) const {
    std::array<Word, 4> left{f, z, f.inverse(), c1};
    return {multiply(left), multiply(z, c2)};
  }

  std::vector<std::pair<Word, Word>> SolutionSet::enumerate(
      std::size_t max_length) const {
    std::vector<std::pair<Word, Word>> out;
    if (kind == Kind::empty) {
      return out;
    }
    for (auto const& z :
         coset_forge::enumerate(from_graph(parameter), max_length)) {
      out.push_back(pair(z));
    }
    return out;
  }

  SolutionSet solve_uniform(Subgroup const& c, Word const& f) {
    reject_member(c, f);
    SolutionSet s{.kind      = SolutionSet::Kind::singleton,
                  .f         = f,
                  .c1        = Word(),
                  .c2        = Word(),
                  .parameter = stabilizer(c.graph(), f)};
    if (!s.parameter.is_trivial()) {
      s.kind = SolutionSet::Kind::parametrized;
    }
    return s;
  }

  SolutionSet solve_equation(Subgroup const& c, Word const& g, Word const& f) {
    reject_member(c, f);
    reject_member(c, g);
    SolutionSet s{.kind      = SolutionSet::Kind::empty,
                  .f         = f,
                  .c1        = Word(),
                  .c2        = Word(),
                  .parameter = SubgroupGraph(c.rank())};
    auto d = find_right_factor(c, f, g);
    if (!d) {
      return s;
    }
    s.c2 = *d;
    std::array<Word, 3> parts{f, *d, g.inverse()};
    s.c1        = multiply(parts);
    s.parameter = stabilizer(c.graph(), f);
    s.kind      = s.parameter.is_trivial() ? SolutionSet::Kind::singleton
                                           : SolutionSet::Kind::parametrized;
    return s;
  }

  bool in_double_coset(Subgroup const& c, Word const& f, Word const& g) {
    return find_right_factor(c, f, g).has_value();
  }

  Word minimal_representative(Subgroup const& c, Word const& f) {
    reject_member(c, f);
    std::array<Automaton, 3> parts{c.automaton(),
                                   word_automaton(c.rank(), f),
                                   c.automaton()};
    return shortest_word(benois_reduce(concatenate(parts))).value();
  }

  DoubleCoset double_coset(Subgroup const& c, Word const& f) {
    reject_member(c, f);
    DoubleCoset d{.f           = f,
                  .stabilizer  = stabilizer(c.graph(), f),
                  .essential   = false,
                  .minimal_rep = minimal_representative(c, f)};
    d.essential = !d.stabilizer.is_trivial();
    return d;
  }

  ////////////////////////////////////////////////////////////////////////
  // Essential cosets
  ////////////////////////////////////////////////////////////////////////

  std::vector<Word> essential_candidates(NielsenBasis const& basis) {
    std::set<Word> pieces{Word()};
    for (std::size_t i = 1; i <= 2 * basis.size(); ++i) {
      Word const& h = basis.at(i).h;
      for (std::size_t first = 0; first < h.length(); ++first) {
        for (std::size_t count = 1; first + count <= h.length(); ++count) {
          pieces.insert(h.subword(first, count));
        }
      }
    }
    std::set<Word> products;
    for (auto const& u : pieces) {
      for (auto const& v : pieces) {
        products.insert(multiply(u, v));
      }
    }
    return {products.begin(), products.end()};
  }

  std::vector<DoubleCoset> essential_cosets(Subgroup const& c) {
    std::vector<DoubleCoset> out;
    if (c.graph().is_trivial()) {
      return out;
    }
    for (auto const& f : essential_candidates(c.basis())) {
      if (c.contains(f)) {
        continue;
      }
      auto st = stabilizer(c.graph(), f);
      if (st.is_trivial()) {
        continue;
      }
      bool known = std::any_of(out.begin(), out.end(), [&](auto const& d) {
        return in_double_coset(c, d.f, f);
      });
      if (!known) {
        out.push_back({f, std::move(st), true, Word()});
      }
    }
    for (auto& d : out) {
      d.minimal_rep = minimal_representative(c, d.f);
    }
    std::sort(out.begin(), out.end(), [](auto const& x, auto const& y) {
      return x.minimal_rep < y.minimal_rep;
    });
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Relative transversals
  ////////////////////////////////////////////////////////////////////////

  RelativeTransversal::RelativeTransversal(
      NielsenBasis basis, SubgroupGraph graph, SpanningTree tree,
      std::vector<CentralDecomposition> decompositions)
      : _basis(std::move(basis)),
        _graph(std::move(graph)),
        _tree(std::move(tree)),
        _decompositions(std::move(decompositions)) {}

  std::vector<YWord> RelativeTransversal::internal() const {
    std::vector<Word> words;
    for (std::uint32_t v = 0; v < _graph.vertex_count(); ++v) {
      words.push_back(_tree.path(v));
    }
    std::sort(words.begin(), words.end());
    std::vector<YWord> out;
    for (auto const& w : words) {
      out.push_back(to_yword(w, _basis.size()));
    }
    return out;
  }

  YWord RelativeTransversal::representative(
      std::span<std::size_t const> y) const {
    Word w       = to_word(y, _basis.size());
    auto [n, v]  = _graph.graph().read_prefix(_graph.basepoint(), w);
    return to_yword(multiply(_tree.path(v), w.suffix(w.length() - n)),
                    _basis.size());
  }

  Word RelativeTransversal::expand(std::span<std::size_t const> y) const {
    LetterString letters;
    for (auto i : y) {
      Word const& h = _basis.at(i).h;
      letters.insert(letters.end(), h.begin(), h.end());
    }
    return Word::reduce(letters);
  }

  Automaton RelativeTransversal::automaton() const {
    std::size_t const r = _basis.size();
    std::size_t const L = 2 * r;
    std::size_t const n = _graph.vertex_count();
    Automaton         y(r, n + L);
    y.add_initial(0);
    for (std::uint32_t s = 0; s < n + L; ++s) {
      y.set_final(s);
    }
    for (std::uint32_t v = 0; v < n; ++v) {
      if (_tree.parent[v] != no_vertex) {
        y.add_arrow(_tree.parent[v], _tree.via[v], v);
      }
      for (std::uint32_t c = 0; c < L; ++c) {
        if (_graph.next(v, Letter(c)) == no_vertex) {
          y.add_arrow(v, Letter(c), static_cast<std::uint32_t>(n + c));
        }
      }
    }
    for (std::uint32_t c = 0; c < L; ++c) {
      for (std::uint32_t d = 0; d < L; ++d) {
        if (Letter(d) != Letter(c).inverse()) {
          y.add_arrow(static_cast<std::uint32_t>(n + c), Letter(d),
                      static_cast<std::uint32_t>(n + d));
        }
      }
    }
    std::vector<Word> images;
    for (std::uint32_t c = 0; c < L; ++c) {
      images.push_back(_basis.at(y_index(Letter(c), r)).h);
    }
    return benois_reduce(substitute(y, images, _basis.ambient_rank()));
  }

  namespace {
    CentralDecomposition decompose(PieceAlphabet const& sigma, YWord expression,
                                   std::size_t central) {
      CentralDecomposition d;
      AdmissibleWord       word = admissible_word(sigma, expression);
      d.expression              = std::move(expression);
      d.central                 = central;
      auto join                 = [&](auto first, auto last) {
        LetterString letters;
        for (auto it = first; it != last; ++it) {
          Word const& w = sigma.word(*it);
          letters.insert(letters.end(), w.begin(), w.end());
        }
        return Word::reduce(letters);
      };
      auto const& p = word.pieces;
      d.prefix.assign(p.begin(), p.begin() + central);
      d.centre = p[central];
      d.suffix.assign(p.begin() + central + 1, p.end());
      d.prefix_word = join(p.begin(), p.begin() + central);
      d.centre_word = sigma.word(d.centre);
      d.suffix_word = join(p.begin() + central + 1, p.end());
      return d;
    }

    // The edge traversed when reading x from s, and the vertex reached.
    std::pair<Edge, std::uint32_t> step(SubgroupGraph const& g,
                                        std::uint32_t s, Letter x) {
      std::uint32_t t = g.next(s, x);
      return {x.is_inverse() ? Edge{t, x.index(), s} : Edge{s, x.index(), t},
              t};
    }

    [[noreturn]] void unrespectable(std::string const& why) {
      throw Error(ErrorCode::central_letter_unrespectable, why);
    }
  }  // namespace

  RelativeTransversal relative_transversal(NielsenBasis const&    basis,
                                           std::span<YWord const> z) {
    std::size_t const r = basis.size();
    std::vector<Word> words;
    for (auto const& y : z) {
      Word w = to_word(y, r);
      if (w.empty() || w.length() != y.size()) {
        throw Error(ErrorCode::invalid_argument,
                    "generators of D must be nontrivial reduced Y-words");
      }
      words.push_back(std::move(w));
    }
    SubgroupGraph g = fold(words, r);
    std::set<Edge> tree_edges, central_edges;
    std::vector<std::size_t> centrals;
    for (auto const& w : words) {
      std::size_t   q = (w.length() + 1) / 2 - 1;
      std::uint32_t v = g.basepoint();
      for (std::size_t i = 0; i < w.length(); ++i) {
        auto [e, next] = step(g, v, w[i]);
        if (next == no_vertex) {
          unrespectable("generator of D is not a loop of its graph");
        }
        (i == q ? central_edges : tree_edges).insert(e);
        v = next;
      }
      centrals.push_back(q);
    }
    if (central_edges.size() != words.size()) {
      unrespectable("two generators of D share a central edge");
    }
    for (auto const& e : central_edges) {
      if (tree_edges.contains(e)) {
        unrespectable("a central edge is also read outside a central letter");
      }
    }
    if (tree_edges.size() + 1 != g.vertex_count()) {
      unrespectable("non-central edges do not form a spanning tree");
    }
    SpanningTree tree;
    tree.parent.assign(g.vertex_count(), no_vertex);
    tree.via.assign(g.vertex_count(), Letter());
    tree.depth.assign(g.vertex_count(), 0);
    std::vector<bool>         seen(g.vertex_count(), false);
    std::deque<std::uint32_t> queue{g.basepoint()};
    seen[g.basepoint()] = true;
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (std::uint32_t c = 0; c < 2 * r; ++c) {
        auto [e, u] = step(g, v, Letter(c));
        if (u != no_vertex && !seen[u] && tree_edges.contains(e)) {
          seen[u]        = true;
          tree.parent[u] = v;
          tree.via[u]    = Letter(c);
          tree.depth[u]  = tree.depth[v] + 1;
          queue.push_back(u);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      unrespectable("non-central edges do not span the graph of D");
    }
    PieceAlphabet                     sigma(basis);
    std::vector<CentralDecomposition> decompositions;
    for (std::size_t i = 0; i < z.size(); ++i) {
      decompositions.push_back(decompose(sigma, z[i], centrals[i]));
    }
    return RelativeTransversal(basis, std::move(g), std::move(tree),
                               std::move(decompositions));
  }

  RelativeTransversal relative_transversal(Subgroup const&      c,
                                           SubgroupGraph const& d) {
    std::size_t const r = c.basis().size();
    std::vector<Word> words;
    for (auto const& w : nielsen_basis(d).words()) {
      auto y = c.expression(w);
      if (!y) {
        throw Error(ErrorCode::not_in_subgroup,
                    "D is not a subgroup of C");
      }
      words.push_back(to_word(*y, r));
    }
    SubgroupGraph g    = fold(words, r);
    SpanningTree  tree = geodesic_spanning_tree(g);
    std::vector<Word>        loops;
    std::vector<std::size_t> centrals;
    for (auto const& e : g.edges()) {
      if (tree.is_tree_edge(e)) {
        continue;
      }
      Word t1 = tree.path(e.source);
      std::array<Word, 3> parts{t1, Word::letter(Letter::generator(e.generator)),
                                tree.path(e.target).inverse()};
      loops.push_back(multiply(parts));
      centrals.push_back(t1.length());
    }
    std::vector<std::size_t> order(loops.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](auto i, auto j) { return loops[i] < loops[j]; });
    PieceAlphabet                     sigma(c.basis());
    std::vector<CentralDecomposition> decompositions;
    for (auto i : order) {
      decompositions.push_back(
          decompose(sigma, to_yword(loops[i], r), centrals[i]));
    }
    return RelativeTransversal(c.basis(), std::move(g), std::move(tree),
                               std::move(decompositions));
  }

  ////////////////////////////////////////////////////////////////////////
  // Normal forms
  ////////////////////////////////////////////////////////////////////////

  CosetNormalizer::CosetNormalizer(Subgroup const& c, Word f)
      : _c(&c), _f(std::move(f)) {
    reject_member(c, _f);
    auto st = stabilizer(c.graph(), _f);
    if (!st.is_trivial()) {
      _transversal.emplace(relative_transversal(c, st));
    }
  }

  NormalForm CosetNormalizer::operator()(Word const& g) const {
    auto d2 = find_right_factor(*_c, _f, g);
    if (!d2) {
      throw Error(ErrorCode::not_in_coset, "word is not in the double coset");
    }
    std::array<Word, 3> left{g, d2->inverse(), _f.inverse()};
    Word                d1 = multiply(left);
    if (!essential()) {
      return {d1, *d2, {}};
    }
    YWord y = _c->expression(*d2).value();
    YWord t = _transversal->representative(y);
    Word  tx = _transversal->expand(t);
    Word  z  = multiply(*d2, tx.inverse());
    std::array<Word, 4> parts{d1, _f, z, _f.inverse()};
    return {multiply(parts), tx, std::move(t)};
  }

  NormalForm normal_form(Subgroup const& c, Word const& f, Word const& g) {
    return CosetNormalizer(c, f)(g);
  }

  ////////////////////////////////////////////////////////////////////////
  // Double coset automata
  ////////////////////////////////////////////////////////////////////////

  DoubleCosetAutomaton double_coset_automaton(Subgroup const& c,
                                              Word const&     f) {
    reject_member(c, f);
    DoubleCosetAutomaton out{.automaton      = Automaton(c.rank()),
                             .representative = minimal_representative(c, f),
                             .essential      = false,
                             .k              = 0,
                             .agreed         = true,
                             .findings       = {}};
    out.k = c.basis().k();
    auto const& f0 = out.representative;
    auto        st = stabilizer(c.graph(), f0);
    out.essential  = !st.is_trivial();

    std::array<Automaton, 3> parts{c.automaton(), word_automaton(c.rank(), f0),
                                   c.automaton()};
    Automaton benois = benois_reduce(concatenate(parts));

    std::optional<Automaton> built;
    try {
      Automaton left = k_reduced_concat(c.automaton(),
                                        word_automaton(c.rank(), f0), out.k);
      Automaton right = out.essential
                            ? relative_transversal(c, st).automaton()
                            : c.automaton();
      built = k_reduced_concat(left, right, out.k);
    } catch (Error const& e) {
      out.findings.push_back(std::string("k-reduced construction failed: ")
                             + e.what());
    }
    out.agreed = built.has_value() && *built == benois;
    if (built && !out.agreed) {
      out.findings.push_back(
          std::string(out.essential ? "C.f.T" : "C.f.C")
          + " k-reduced automaton differs from the Benois reduction of C.f.C");
    }
    out.automaton = out.agreed ? std::move(*built) : std::move(benois);
    return out;
  }

  bool membership(Subgroup const& c, Word const& f, Word const& g) {
    if (c.contains(f)) {
      return c.contains(g);
    }
    bool by_automaton = accepts(double_coset_automaton(c, f).automaton, g);
    if (by_automaton != in_double_coset(c, f, g)) {
      throw Error(ErrorCode::invalid_argument,
                  "double coset automaton and equation search disagree");
    }
    return by_automaton;
  }

  ////////////////////////////////////////////////////////////////////////
  // Cancellation bounds
  ////////////////////////////////////////////////////////////////////////

  namespace {
    struct Sampler {
      Subgroup const*                    c;
      Word                               f;
      RelativeTransversal const*         transversal;
      std::uint64_t                      seed;
      std::size_t                        max_length;
      std::size_t                        short_length;

      YWord random_word(std::mt19937_64& rng) const {
        std::size_t const r = c->basis().size();
        YWord             y;
        if (r == 0) {
          return y;
        }
        std::size_t bound = std::bernoulli_distribution(0.5)(rng)
                                ? std::min(short_length, max_length)
                                : max_length;
        std::size_t n = std::uniform_int_distribution<std::size_t>(0, bound)(rng);
        std::uniform_int_distribution<std::size_t> first(1, 2 * r);
        std::uniform_int_distribution<std::size_t> other(1, 2 * r - 1);
        for (std::size_t i = 0; i < n; ++i) {
          if (y.empty()) {
            y.push_back(first(rng));
            continue;
          }
          std::size_t forbidden = y.back() > r ? y.back() - r : y.back() + r;
          std::size_t next      = other(rng);
          y.push_back(next >= forbidden ? next + 1 : next);
        }
        return y;
      }

      std::pair<Word, Word> operator()(std::size_t index) const {
        std::seed_seq   seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index),
                          static_cast<std::uint32_t>(index >> 32)};
        std::mt19937_64 rng(seq);
        YWord           yc = random_word(rng);
        YWord           yd = random_word(rng);
        Word            d  = transversal == nullptr
                                 ? c->evaluate(yd)
                                 : transversal->expand(transversal->representative(yd));
        return {c->evaluate(yc), std::move(d)};
      }
    };

    struct Outcome {
      std::size_t cn        = 0;
      std::size_t index     = 0;
      bool        surviving = false;
      bool        shorter   = false;
    };

    Outcome evaluate(Sampler const& sampler, std::size_t index) {
      auto [c, d]                 = sampler(index);
      std::array<Word, 3> factors{c, sampler.f, d};
      Outcome             out;
      out.index     = index;
      out.cn        = cn(factors);
      auto alive    = surviving_letters(factors);
      out.surviving = std::find(alive[1].begin(), alive[1].end(), true)
                      != alive[1].end();
      out.shorter   = multiply(factors).length() < sampler.f.length();
      return out;
    }

    // Running maxima; ties keep the smallest sample index so the result
    // does not depend on how samples are split between threads.
    struct Tally {
      Outcome     best;
      bool        any                = false;
      std::size_t max_surviving      = 0;
      std::size_t surviving_samples  = 0;
      bool        shorter            = false;
      std::size_t shorter_index      = 0;

      void add(Outcome const& o) {
        if (!any || o.cn > best.cn || (o.cn == best.cn && o.index < best.index)) {
          best = o;
          any  = true;
        }
        if (o.surviving) {
          ++surviving_samples;
          max_surviving = std::max(max_surviving, o.cn);
        }
        if (o.shorter && (!shorter || o.index < shorter_index)) {
          shorter       = true;
          shorter_index = o.index;
        }
      }

      void merge(Tally const& t) {
        if (t.any) {
          if (!any || t.best.cn > best.cn
              || (t.best.cn == best.cn && t.best.index < best.index)) {
            best = t.best;
            any  = true;
          }
        }
        max_surviving = std::max(max_surviving, t.max_surviving);
        surviving_samples += t.surviving_samples;
        if (t.shorter && (!shorter || t.shorter_index < shorter_index)) {
          shorter       = true;
          shorter_index = t.shorter_index;
        }
      }
    };

    template <typename Loop>
    KReducedReport verify(Subgroup const& c, Word const& f,
                          KReducedOptions const& options, Loop&& loop) {
      KReducedReport report;
      report.seed      = options.seed;
      report.f         = minimal_representative(c, f);
      report.M         = c.basis().M();
      report.p         = c.basis().p();
      report.k         = c.basis().k();
      report.samples   = options.samples;
      auto st          = stabilizer(c.graph(), report.f);
      report.essential = !st.is_trivial();
      std::optional<RelativeTransversal> transversal;
      if (report.essential) {
        transversal.emplace(relative_transversal(c, st));
      }
      std::size_t length = options.max_y_length;
      if (length == 0) {
        std::uint64_t natural = report.p >= (std::uint64_t(1) << 62)
                                    ? std::uint64_t(1) << 62
                                    : 2 * report.p + 2;
        length = static_cast<std::size_t>(
            std::min<std::uint64_t>(natural, options.max_y_length_cap));
      }
      report.max_sample_y_length = length;
      Sampler sampler{&c,
                      report.f,
                      transversal ? &*transversal : nullptr,
                      options.seed,
                      length,
                      static_cast<std::size_t>(2 * report.M)};
      Tally tally = loop(sampler, options.samples);
      if (tally.shorter) {
        auto [x, y] = sampler(tally.shorter_index);
        Alphabet alphabet(c.rank());
        throw Error(ErrorCode::minimality_violated,
                    "sample " + std::to_string(tally.shorter_index)
                        + " gives a product shorter than "
                        + alphabet.format(report.f));
      }
      if (tally.any) {
        report.max_cn                     = tally.best.cn;
        std::tie(report.witness_c, report.witness_d) = sampler(tally.best.index);
      }
      report.violation           = report.max_cn > report.k;
      report.max_cn_surviving    = tally.max_surviving;
      report.surviving_samples   = tally.surviving_samples;
      report.surviving_violation = tally.max_surviving > 2 * report.M;
      return report;
    }
  }  // namespace

  KReducedReport verify_k_reduced_serial(Subgroup const& c, Word const& f,
                                         KReducedOptions const& options) {
    return verify(c, f, options, [](Sampler const& sampler, std::size_t n) {
      Tally tally;
      for (std::size_t i = 0; i < n; ++i) {
        tally.add(evaluate(sampler, i));
      }
      return tally;
    });
  }

  KReducedReport verify_k_reduced(Subgroup const& c, Word const& f,
                                  KReducedOptions const& options) {
    return verify(c, f, options, [](Sampler const& sampler, std::size_t n) {
      Tally total;
#pragma omp parallel
      {
        Tally local;
#pragma omp for schedule(dynamic, 16) nowait
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
          local.add(evaluate(sampler, static_cast<std::size_t>(i)));
        }
#pragma omp critical
        total.merge(local);
      }
      return total;
    });
  }

  std::vector<std::size_t> cancellation_growth(Subgroup const& c,
                                               Word const&     f,
                                               std::size_t     max_n) {
    std::size_t const r = c.basis().size();
    // Reduced Y-words grouped by length.
    std::vector<std::vector<Word>> by_length{{Word()}};
    for (std::size_t n = 1; n <= max_n; ++n) {
      by_length.emplace_back();
      for (auto const& y : by_length[n - 1]) {
        for (std::size_t i = 1; i <= 2 * r; ++i) {
          Letter x = y_letter(i, r);
          if (!y.empty() && y.back() == x.inverse()) {
            continue;
          }
          LetterString letters(y.begin(), y.end());
          letters.push_back(x);
          by_length[n].push_back(Word::reduce(letters));
        }
      }
    }
    std::vector<std::size_t> out;
    std::vector<Word>        elements;
    for (std::size_t n = 1; n <= max_n; ++n) {
      for (auto const& y : by_length[n]) {
        elements.push_back(c.evaluate(to_yword(y, r)));
      }
      if (n == 1) {
        elements.push_back(Word());
      }
      std::size_t best = 0;
      for (auto const& x : elements) {
        for (auto const& y : elements) {
          best = std::max(best, cn({x, f, y}));
        }
      }
      out.push_back(best);
    }
    return out;
  }

}  // namespace coset_forge
