#include "coset_forge/automaton.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "coset_forge/error.hpp"

namespace coset_forge {

  ////////////////////////////////////////////////////////////////////////
  // Automaton
  ////////////////////////////////////////////////////////////////////////

  Automaton::Automaton(std::size_t rank, std::size_t state_count)
      : _rank(rank), _final(state_count, false) {}

  std::vector<std::uint32_t> Automaton::finals() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t s = 0; s < state_count(); ++s) {
      if (_final[s]) {
        out.push_back(s);
      }
    }
    return out;
  }

  std::uint32_t Automaton::add_state(bool final) {
    _final.push_back(final);
    return static_cast<std::uint32_t>(_final.size() - 1);
  }

  void Automaton::add_arrow(std::uint32_t source, Letter x,
                            std::uint32_t target) {
    assert(x.code() < letter_count());
    _arrows.push_back({source, static_cast<std::int32_t>(x.code()), target});
  }

  void Automaton::add_epsilon(std::uint32_t source, std::uint32_t target) {
    _arrows.push_back({source, epsilon, target});
  }

  void Automaton::add_initial(std::uint32_t s) {
    if (std::find(_initial.begin(), _initial.end(), s) == _initial.end()) {
      _initial.push_back(s);
    }
  }

  void Automaton::set_final(std::uint32_t s, bool value) {
    _final[s] = value;
  }

  bool Automaton::is_deterministic() const {
    if (_initial.size() != 1) {
      return false;
    }
    std::set<std::pair<std::uint32_t, std::int32_t>> seen;
    for (auto const& a : _arrows) {
      if (a.label == epsilon || !seen.emplace(a.source, a.label).second) {
        return false;
      }
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Determinisation and minimisation
  ////////////////////////////////////////////////////////////////////////

  namespace {

    // Partial DFA; no_vertex marks a missing transition.
    struct Dfa {
      std::size_t                letters = 0;
      std::vector<std::uint32_t> table;
      std::vector<bool>          final;

      std::size_t size() const {
        return final.size();
      }
      std::uint32_t next(std::uint32_t s, std::uint32_t c) const {
        return table[s * letters + c];
      }
      std::uint32_t add_state(bool f) {
        final.push_back(f);
        table.resize(table.size() + letters, no_vertex);
        return static_cast<std::uint32_t>(final.size() - 1);
      }
    };

    struct Adjacency {
      // by_label[s * (letters + 1) + label + 1]
      std::size_t                             letters;
      std::vector<std::vector<std::uint32_t>> lists;

      Adjacency(Automaton const& a)
          : letters(a.letter_count()),
            lists(a.state_count() * (a.letter_count() + 1)) {
        for (auto const& arrow : a.arrows()) {
          lists[arrow.source * (letters + 1) + (arrow.label + 1)].push_back(
              arrow.target);
        }
      }
      std::vector<std::uint32_t> const& operator()(std::uint32_t s,
                                                   std::int32_t  label) const {
        return lists[s * (letters + 1) + (label + 1)];
      }
    };

    void close(Adjacency const& adj, std::vector<std::uint32_t>& set,
               std::vector<bool>& mark) {
      std::vector<std::uint32_t> stack(set.begin(), set.end());
      for (auto s : set) {
        mark[s] = true;
      }
      while (!stack.empty()) {
        auto s = stack.back();
        stack.pop_back();
        for (auto t : adj(s, epsilon)) {
          if (!mark[t]) {
            mark[t] = true;
            set.push_back(t);
            stack.push_back(t);
          }
        }
      }
      for (auto s : set) {
        mark[s] = false;
      }
      std::sort(set.begin(), set.end());
    }

    Dfa determinize(Automaton const& a) {
      Dfa d;
      d.letters = a.letter_count();
      Adjacency                                         adj(a);
      std::vector<bool>                                 mark(a.state_count());
      std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
      std::vector<std::vector<std::uint32_t>>           subsets;

      auto is_final = [&](std::vector<std::uint32_t> const& set) {
        return std::any_of(set.begin(), set.end(),
                           [&](auto s) { return a.is_final(s); });
      };
      std::vector<std::uint32_t> start(a.initial().begin(), a.initial().end());
      close(adj, start, mark);
      ids[start] = d.add_state(is_final(start));
      subsets.push_back(start);
      for (std::size_t head = 0; head < subsets.size(); ++head) {
        for (std::uint32_t c = 0; c < d.letters; ++c) {
          std::vector<std::uint32_t> next;
          for (auto s : subsets[head]) {
            for (auto t : adj(s, static_cast<std::int32_t>(c))) {
              if (!mark[t]) {
                mark[t] = true;
                next.push_back(t);
              }
            }
          }
          for (auto t : next) {
            mark[t] = false;
          }
          if (next.empty()) {
            continue;
          }
          close(adj, next, mark);
          auto [it, fresh] = ids.try_emplace(next, 0);
          if (fresh) {
            it->second = d.add_state(is_final(next));
            subsets.push_back(next);
          }
          d.table[head * d.letters + c] = it->second;
        }
      }
      return d;
    }

    // Hopcroft's partition refinement on the totalised DFA, followed by
    // removal of the dead class and breadth-first renumbering from state 0.
    Automaton minimize(Dfa const& d, std::size_t rank) {
      std::size_t const   n    = d.size() + 1;  // + dead state
      std::uint32_t const dead = static_cast<std::uint32_t>(d.size());
      std::size_t const   L    = d.letters;
      auto total = [&](std::uint32_t s, std::uint32_t c) -> std::uint32_t {
        if (s == dead) {
          return dead;
        }
        auto t = d.next(s, c);
        return t == no_vertex ? dead : t;
      };
      // inverse[c][t] = sources
      std::vector<std::vector<std::vector<std::uint32_t>>> inverse(
          L, std::vector<std::vector<std::uint32_t>>(n));
      for (std::uint32_t s = 0; s < n; ++s) {
        for (std::uint32_t c = 0; c < L; ++c) {
          inverse[c][total(s, c)].push_back(s);
        }
      }
      std::vector<std::vector<std::uint32_t>> blocks;
      std::vector<std::uint32_t>              block_of(n);
      {
        std::vector<std::uint32_t> fin, rest;
        for (std::uint32_t s = 0; s < n; ++s) {
          (s != dead && d.final[s] ? fin : rest).push_back(s);
        }
        for (auto* b : {&fin, &rest}) {
          if (!b->empty()) {
            for (auto s : *b) {
              block_of[s] = static_cast<std::uint32_t>(blocks.size());
            }
            blocks.push_back(*b);
          }
        }
      }
      std::vector<bool>          waiting(blocks.size(), true);
      std::deque<std::uint32_t>  work;
      for (std::uint32_t b = 0; b < blocks.size(); ++b) {
        work.push_back(b);
      }
      std::vector<std::uint32_t> hits(n, 0);
      std::vector<bool>          in_x(n, false);
      while (!work.empty()) {
        std::uint32_t splitter = work.front();
        work.pop_front();
        waiting[splitter]                   = false;
        std::vector<std::uint32_t> members = blocks[splitter];
        for (std::uint32_t c = 0; c < L; ++c) {
          std::vector<std::uint32_t> x;
          for (auto t : members) {
            for (auto s : inverse[c][t]) {
              if (!in_x[s]) {
                in_x[s] = true;
                x.push_back(s);
              }
            }
          }
          std::vector<std::uint32_t> touched;
          for (auto s : x) {
            if (hits[block_of[s]]++ == 0) {
              touched.push_back(block_of[s]);
            }
          }
          for (auto b : touched) {
            if (hits[b] < blocks[b].size()) {
              std::vector<std::uint32_t> inside, outside;
              for (auto s : blocks[b]) {
                (in_x[s] ? inside : outside).push_back(s);
              }
              auto fresh = static_cast<std::uint32_t>(blocks.size());
              blocks[b]  = std::move(outside);
              for (auto s : inside) {
                block_of[s] = fresh;
              }
              blocks.push_back(std::move(inside));
              waiting.push_back(false);
              if (waiting[b]) {
                waiting[fresh] = true;
                work.push_back(fresh);
              } else {
                auto smaller = blocks[b].size() <= blocks[fresh].size() ? b
                                                                        : fresh;
                waiting[smaller] = true;
                work.push_back(smaller);
              }
            }
            hits[b] = 0;
          }
          for (auto s : x) {
            in_x[s] = false;
          }
        }
      }
      std::uint32_t const dead_block = block_of[dead];
      Automaton           out(rank);
      std::vector<std::uint32_t> renumber(blocks.size(), no_vertex);
      std::vector<std::uint32_t> order{block_of[0]};
      renumber[block_of[0]] = out.add_state(d.final[0]);
      out.add_initial(0);
      if (block_of[0] == dead_block) {
        return out;
      }
      for (std::size_t head = 0; head < order.size(); ++head) {
        std::uint32_t rep = blocks[order[head]].front();
        for (std::uint32_t c = 0; c < L; ++c) {
          std::uint32_t tb = block_of[total(rep, c)];
          if (tb == dead_block) {
            continue;
          }
          if (renumber[tb] == no_vertex) {
            renumber[tb] = out.add_state(d.final[blocks[tb].front()]);
            order.push_back(tb);
          }
          out.add_arrow(static_cast<std::uint32_t>(head), Letter(c),
                        renumber[tb]);
        }
      }
      return out;
    }

    Dfa as_dfa(Automaton const& a) {
      if (!a.is_deterministic()) {
        return determinize(a);
      }
      // Renumber so the initial state is 0.
      Dfa                        d;
      d.letters = a.letter_count();
      std::vector<std::uint32_t> id(a.state_count());
      std::uint32_t              init = a.initial().front();
      for (std::uint32_t s = 0; s < a.state_count(); ++s) {
        id[s] = s == init ? 0 : (s < init ? s + 1 : s);
      }
      for (std::uint32_t s = 0; s < a.state_count(); ++s) {
        d.add_state(false);
      }
      for (std::uint32_t s = 0; s < a.state_count(); ++s) {
        d.final[id[s]] = a.is_final(s);
      }
      for (auto const& arrow : a.arrows()) {
        d.table[id[arrow.source] * d.letters + arrow.label] = id[arrow.target];
      }
      return d;
    }

  }  // namespace

  Automaton canonical_dfa(Automaton const& a) {
    if (a.initial().empty()) {
      Automaton out(a.rank());
      out.add_state();
      out.add_initial(0);
      return out;
    }
    return minimize(as_dfa(a), a.rank());
  }

  bool language_equal(Automaton const& a, Automaton const& b) {
    return canonical_dfa(a) == canonical_dfa(b);
  }

  ////////////////////////////////////////////////////////////////////////
  // Basic constructions
  ////////////////////////////////////////////////////////////////////////

  Automaton word_automaton(std::size_t rank, std::span<Letter const> w) {
    Automaton a(rank);
    auto      s = a.add_state();
    a.add_initial(s);
    for (Letter x : w) {
      auto t = a.add_state();
      a.add_arrow(s, x, t);
      s = t;
    }
    a.set_final(s);
    return a;
  }

  Automaton word_automaton(std::size_t rank, Word const& w) {
    return word_automaton(rank, w.letters());
  }

  Automaton from_graph(SubgroupGraph const& g) {
    Automaton a(g.rank(), g.vertex_count());
    a.add_initial(g.basepoint());
    a.set_final(g.basepoint());
    for (auto const& e : g.edges()) {
      auto x = Letter::generator(e.generator);
      a.add_arrow(e.source, x, e.target);
      a.add_arrow(e.target, x.inverse(), e.source);
    }
    return a;
  }

  Automaton reduced_acceptor(std::size_t rank) {
    Automaton a(rank);
    for (std::size_t s = 0; s <= 2 * rank; ++s) {
      a.add_state(true);
    }
    a.add_initial(0);
    for (std::uint32_t s = 0; s <= 2 * rank; ++s) {
      for (std::uint32_t c = 0; c < 2 * rank; ++c) {
        if (s != 0 && Letter(s - 1) == Letter(c).inverse()) {
          continue;
        }
        a.add_arrow(s, Letter(c), 1 + c);
      }
    }
    return a;
  }

  Automaton intersect(Automaton const& a, Automaton const& b) {
    if (a.rank() != b.rank()) {
      throw Error(ErrorCode::invalid_argument,
                  "cannot intersect automata over different alphabets");
    }
    if (a.initial().empty() || b.initial().empty()) {
      return canonical_dfa(Automaton(a.rank()));
    }
    Dfa da = as_dfa(a), db = as_dfa(b);
    Dfa product;
    product.letters = da.letters;
    std::unordered_map<std::uint64_t, std::uint32_t>     ids;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs{{0, 0}};
    ids[0] = product.add_state(da.final[0] && db.final[0]);
    for (std::size_t head = 0; head < pairs.size(); ++head) {
      auto [p, q] = pairs[head];
      for (std::uint32_t c = 0; c < product.letters; ++c) {
        auto p2 = da.next(p, c), q2 = db.next(q, c);
        if (p2 == no_vertex || q2 == no_vertex) {
          continue;
        }
        std::uint64_t key = std::uint64_t(p2) * db.size() + q2;
        auto [it, fresh]  = ids.try_emplace(key, 0);
        if (fresh) {
          it->second = product.add_state(da.final[p2] && db.final[q2]);
          pairs.emplace_back(p2, q2);
        }
        product.table[head * product.letters + c] = it->second;
      }
    }
    return minimize(product, a.rank());
  }

  namespace {
    std::uint32_t append(Automaton& into, Automaton const& part) {
      auto offset = static_cast<std::uint32_t>(into.state_count());
      for (std::uint32_t s = 0; s < part.state_count(); ++s) {
        into.add_state(false);
      }
      for (auto const& arrow : part.arrows()) {
        if (arrow.label == epsilon) {
          into.add_epsilon(offset + arrow.source, offset + arrow.target);
        } else {
          into.add_arrow(offset + arrow.source,
                         Letter(static_cast<std::uint32_t>(arrow.label)),
                         offset + arrow.target);
        }
      }
      return offset;
    }
  }  // namespace

  Automaton concatenate(Automaton const& a, Automaton const& b) {
    Automaton out(a.rank());
    auto      oa = append(out, a);
    auto      ob = append(out, b);
    for (auto s : a.initial()) {
      out.add_initial(oa + s);
    }
    for (auto f : a.finals()) {
      for (auto s : b.initial()) {
        out.add_epsilon(oa + f, ob + s);
      }
    }
    for (auto f : b.finals()) {
      out.set_final(ob + f);
    }
    return out;
  }

  Automaton concatenate(std::span<Automaton const> parts) {
    assert(!parts.empty());
    Automaton out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
      out = concatenate(out, parts[i]);
    }
    return out;
  }

  Automaton union_of(Automaton const& a, Automaton const& b) {
    Automaton out(a.rank());
    auto      oa = append(out, a);
    auto      ob = append(out, b);
    for (auto s : a.initial()) {
      out.add_initial(oa + s);
    }
    for (auto s : b.initial()) {
      out.add_initial(ob + s);
    }
    for (auto f : a.finals()) {
      out.set_final(oa + f);
    }
    for (auto f : b.finals()) {
      out.set_final(ob + f);
    }
    return out;
  }

  Automaton substitute(Automaton const& a, std::span<Word const> images,
                       std::size_t target_rank) {
    assert(images.size() == a.letter_count());
    Automaton out(target_rank, a.state_count());
    for (auto s : a.initial()) {
      out.add_initial(s);
    }
    for (auto f : a.finals()) {
      out.set_final(f);
    }
    for (auto const& arrow : a.arrows()) {
      if (arrow.label == epsilon) {
        out.add_epsilon(arrow.source, arrow.target);
        continue;
      }
      Word const& image = images[static_cast<std::size_t>(arrow.label)];
      if (image.empty()) {
        out.add_epsilon(arrow.source, arrow.target);
        continue;
      }
      std::uint32_t s = arrow.source;
      for (std::size_t i = 0; i + 1 < image.length(); ++i) {
        auto t = out.add_state();
        out.add_arrow(s, image[i], t);
        s = t;
      }
      out.add_arrow(s, image.back(), arrow.target);
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Benois reduction
  ////////////////////////////////////////////////////////////////////////

  namespace {
    class BitMatrix {
     public:
      explicit BitMatrix(std::size_t n)
          : _n(n), _words((n + 63) / 64), _bits(n * _words, 0) {}
      bool get(std::size_t i, std::size_t j) const {
        return (_bits[i * _words + j / 64] >> (j % 64)) & 1U;
      }
      void set(std::size_t i, std::size_t j) {
        _bits[i * _words + j / 64] |= std::uint64_t(1) << (j % 64);
      }

     private:
      std::size_t                _n;
      std::size_t                _words;
      std::vector<std::uint64_t> _bits;
    };

    // Reflexive-transitive closure of the epsilon arrows.
    BitMatrix epsilon_closure(std::size_t                                    n,
                              std::vector<std::vector<std::uint32_t>> const& eps) {
      BitMatrix                  closure(n);
      std::vector<std::uint32_t> stack;
      for (std::uint32_t s = 0; s < n; ++s) {
        closure.set(s, s);
        stack.assign(1, s);
        while (!stack.empty()) {
          auto u = stack.back();
          stack.pop_back();
          for (auto v : eps[u]) {
            if (!closure.get(s, v)) {
              closure.set(s, v);
              stack.push_back(v);
            }
          }
        }
      }
      return closure;
    }
  }  // namespace

  Automaton benois_reduce(Automaton const& a) {
    std::size_t const n = a.state_count();
    std::size_t const L = a.letter_count();
    std::vector<std::vector<std::uint32_t>> eps(n);
    // out[s * L + c]
    std::vector<std::vector<std::uint32_t>> out(n * L);
    for (auto const& arrow : a.arrows()) {
      if (arrow.label == epsilon) {
        eps[arrow.source].push_back(arrow.target);
      } else {
        out[arrow.source * L + arrow.label].push_back(arrow.target);
      }
    }
    while (true) {
      BitMatrix closure = epsilon_closure(n, eps);
      std::vector<std::pair<std::uint32_t, std::uint32_t>> added;
      for (std::uint32_t p = 0; p < n; ++p) {
        for (std::uint32_t c = 0; c < L; ++c) {
          std::uint32_t inv = Letter(c).inverse().code();
          for (auto r : out[p * L + c]) {
            for (std::uint32_t r2 = 0; r2 < n; ++r2) {
              if (!closure.get(r, r2)) {
                continue;
              }
              for (auto q : out[r2 * L + inv]) {
                if (!closure.get(p, q)) {
                  added.emplace_back(p, q);
                }
              }
            }
          }
        }
      }
      if (added.empty()) {
        break;
      }
      std::sort(added.begin(), added.end());
      added.erase(std::unique(added.begin(), added.end()), added.end());
      for (auto [p, q] : added) {
        eps[p].push_back(q);
      }
    }
    Automaton saturated = a;
    for (std::uint32_t p = 0; p < n; ++p) {
      for (auto q : eps[p]) {
        saturated.add_epsilon(p, q);
      }
    }
    return intersect(saturated, reduced_acceptor(a.rank()));
  }

  ////////////////////////////////////////////////////////////////////////
  // Enumeration
  ////////////////////////////////////////////////////////////////////////

  bool accepts(Automaton const& a, std::span<Letter const> w) {
    Adjacency                  adj(a);
    std::vector<bool>          mark(a.state_count());
    std::vector<std::uint32_t> current(a.initial().begin(), a.initial().end());
    close(adj, current, mark);
    for (Letter x : w) {
      std::vector<std::uint32_t> next;
      for (auto s : current) {
        for (auto t : adj(s, static_cast<std::int32_t>(x.code()))) {
          if (!mark[t]) {
            mark[t] = true;
            next.push_back(t);
          }
        }
      }
      for (auto t : next) {
        mark[t] = false;
      }
      close(adj, next, mark);
      current = std::move(next);
      if (current.empty()) {
        return false;
      }
    }
    return std::any_of(current.begin(), current.end(),
                       [&](auto s) { return a.is_final(s); });
  }

  namespace {
    std::vector<LetterString> enumerate_dfa(Automaton const& dfa,
                                            std::size_t      max_length) {
      std::size_t const n = dfa.state_count();
      std::size_t const L = dfa.letter_count();
      std::vector<std::uint32_t> table(n * L, no_vertex);
      for (auto const& arrow : dfa.arrows()) {
        table[arrow.source * L + arrow.label] = arrow.target;
      }
      // reach[r][s]: some word of length exactly r leads from s to a final.
      std::vector<std::vector<bool>> reach(max_length + 1,
                                           std::vector<bool>(n, false));
      for (std::uint32_t s = 0; s < n; ++s) {
        reach[0][s] = dfa.is_final(s);
      }
      for (std::size_t r = 1; r <= max_length; ++r) {
        for (std::uint32_t s = 0; s < n; ++s) {
          for (std::uint32_t c = 0; c < L && !reach[r][s]; ++c) {
            auto t = table[s * L + c];
            reach[r][s] = t != no_vertex && reach[r - 1][t];
          }
        }
      }
      std::vector<LetterString> out;
      LetterString              prefix;
      auto walk = [&](auto&& self, std::uint32_t s, std::size_t remaining) {
        if (remaining == 0) {
          out.push_back(prefix);
          return;
        }
        for (std::uint32_t c = 0; c < L; ++c) {
          auto t = table[s * L + c];
          if (t != no_vertex && reach[remaining - 1][t]) {
            prefix.push_back(Letter(c));
            self(self, t, remaining - 1);
            prefix.pop_back();
          }
        }
      };
      for (std::size_t len = 0; len <= max_length; ++len) {
        if (n > 0 && reach[len][0]) {
          walk(walk, 0, len);
        }
      }
      return out;
    }
  }  // namespace

  std::vector<LetterString> enumerate_strings(Automaton const& a,
                                              std::size_t      max_length) {
    return enumerate_dfa(canonical_dfa(a), max_length);
  }

  std::vector<Word> enumerate(Automaton const& a, std::size_t max_length) {
    auto strings
        = enumerate_dfa(intersect(a, reduced_acceptor(a.rank())), max_length);
    std::vector<Word> out;
    out.reserve(strings.size());
    for (auto const& s : strings) {
      out.push_back(Word::reduce(s));
    }
    return out;
  }

  std::optional<Word> shortest_word(Automaton const& a) {
    Automaton   dfa = intersect(a, reduced_acceptor(a.rank()));
    std::size_t L   = dfa.letter_count();
    std::vector<std::uint32_t> table(dfa.state_count() * L, no_vertex);
    for (auto const& arrow : dfa.arrows()) {
      table[arrow.source * L + arrow.label] = arrow.target;
    }
    std::vector<std::uint32_t> parent(dfa.state_count(), no_vertex);
    std::vector<Letter>        via(dfa.state_count());
    std::vector<bool>          seen(dfa.state_count(), false);
    std::deque<std::uint32_t>  queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      auto s = queue.front();
      queue.pop_front();
      if (dfa.is_final(s)) {
        LetterString letters;
        for (auto v = s; v != 0; v = parent[v]) {
          letters.push_back(via[v]);
        }
        std::reverse(letters.begin(), letters.end());
        return Word::reduce(letters);
      }
      for (std::uint32_t c = 0; c < L; ++c) {
        auto t = table[s * L + c];
        if (t != no_vertex && !seen[t]) {
          seen[t]   = true;
          parent[t] = s;
          via[t]    = Letter(c);
          queue.push_back(t);
        }
      }
    }
    return std::nullopt;
  }

  ////////////////////////////////////////////////////////////////////////
  // k-reduced concatenation
  ////////////////////////////////////////////////////////////////////////

  Automaton k_reduced_concat(Automaton const& a1, Automaton const& a2,
                             std::uint64_t k, std::size_t validation_length) {
    Automaton d1 = canonical_dfa(a1);
    Automaton d2 = canonical_dfa(a2);
    std::size_t const n1 = d1.state_count(), n2 = d2.state_count();
    std::size_t const L = d1.letter_count();

    std::vector<std::uint32_t>              next2(n2 * L, no_vertex);
    std::vector<std::vector<std::uint32_t>> previous1(n1 * L);
    for (auto const& arrow : d1.arrows()) {
      previous1[arrow.target * L + arrow.label].push_back(arrow.source);
    }
    for (auto const& arrow : d2.arrows()) {
      next2[arrow.source * L + arrow.label] = arrow.target;
    }

    Automaton out(d1.rank());
    append(out, d1);
    auto offset = append(out, d2);
    out.add_initial(0);
    for (auto f : d2.finals()) {
      out.set_final(offset + f);
    }

    // State (p, q, last letter of u or none): u^-1 reads p -> final of d1,
    // u reads start of d2 -> q. Extending u by x moves p to a predecessor
    // along x^-1 and q forwards along x.
    std::uint32_t const none = static_cast<std::uint32_t>(L);
    auto key = [&](std::uint32_t p, std::uint32_t q, std::uint32_t last) {
      return (std::uint64_t(p) * n2 + q) * (L + 1) + last;
    };
    std::unordered_map<std::uint64_t, std::uint64_t> depth;
    std::deque<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> queue;
    std::set<std::pair<std::uint32_t, std::uint32_t>> links;
    for (auto f : d1.finals()) {
      depth[key(f, 0, none)] = 0;
      queue.emplace_back(f, 0, none);
    }
    while (!queue.empty()) {
      auto [p, q, last] = queue.front();
      queue.pop_front();
      links.emplace(p, q);
      auto d = depth[key(p, q, last)];
      if (d >= k) {
        continue;
      }
      for (std::uint32_t c = 0; c < L; ++c) {
        if (last != none && Letter(c) == Letter(last).inverse()) {
          continue;
        }
        auto q2 = next2[q * L + c];
        if (q2 == no_vertex) {
          continue;
        }
        for (auto p2 : previous1[p * L + Letter(c).inverse().code()]) {
          auto [it, fresh] = depth.try_emplace(key(p2, q2, c), d + 1);
          if (fresh) {
            queue.emplace_back(p2, q2, c);
          }
        }
      }
    }
    for (auto [p, q] : links) {
      out.add_epsilon(p, offset + q);
    }

    if (validation_length > 0) {
      auto left  = enumerate(d1, validation_length);
      auto right = enumerate(d2, validation_length);
      for (auto const& u : left) {
        for (auto const& v : right) {
          if (cancellation(u, v) > k) {
            Alphabet alphabet(d1.rank());
            throw Error(ErrorCode::k_bound_violated,
                        "product " + alphabet.format(u) + " * "
                            + alphabet.format(v) + " cancels more than "
                            + std::to_string(k) + " letters");
          }
        }
      }
    }
    return intersect(out, reduced_acceptor(d1.rank()));
  }

  ////////////////////////////////////////////////////////////////////////
  // Cones
  ////////////////////////////////////////////////////////////////////////

  Automaton cone_automaton(Word const& w1, Word const& w2, std::size_t rank) {
    std::size_t const L = 2 * rank;
    Automaton         a(rank);
    // Spine for w1; its end remembers the last letter of w1.
    std::uint32_t s = a.add_state();
    a.add_initial(s);
    for (Letter x : w1) {
      auto t = a.add_state();
      a.add_arrow(s, x, t);
      s = t;
    }
    std::uint32_t const spine_end = s;
    // Core state 1 + c of the last-letter automaton, shifted.
    std::uint32_t const core = static_cast<std::uint32_t>(a.state_count());
    for (std::size_t c = 0; c < L; ++c) {
      a.add_state();
    }
    auto allowed_after = [&](std::optional<Letter> last, Letter x) {
      return !last || *last != x.inverse();
    };
    std::optional<Letter> end_letter;
    if (!w1.empty()) {
      end_letter = w1.back();
    }
    for (std::uint32_t c = 0; c < L; ++c) {
      if (allowed_after(end_letter, Letter(c))) {
        a.add_arrow(spine_end, Letter(c), core + c);
      }
      for (std::uint32_t d = 0; d < L; ++d) {
        if (Letter(d) != Letter(c).inverse()) {
          a.add_arrow(core + c, Letter(d), core + d);
        }
      }
    }
    if (w2.empty()) {
      a.set_final(spine_end);
      for (std::uint32_t c = 0; c < L; ++c) {
        a.set_final(core + c);
      }
      return canonical_dfa(a);
    }
    // Spine for w2, entered from the end of w1 or from any core state whose
    // last letter does not cancel with the first letter of w2.
    std::uint32_t t = a.add_state();
    if (allowed_after(end_letter, w2.front())) {
      a.add_arrow(spine_end, w2.front(), t);
    }
    for (std::uint32_t c = 0; c < L; ++c) {
      if (Letter(c) != w2.front().inverse()) {
        a.add_arrow(core + c, w2.front(), t);
      }
    }
    for (std::size_t i = 1; i < w2.length(); ++i) {
      auto u = a.add_state();
      a.add_arrow(t, w2[i], u);
      t = u;
    }
    a.set_final(t);
    return canonical_dfa(a);
  }

  ////////////////////////////////////////////////////////////////////////
  // Text format
  ////////////////////////////////////////////////////////////////////////

  std::string to_text(Automaton const& a, Alphabet const& alphabet) {
    std::ostringstream out;
    auto               join = [&](auto const& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + std::to_string(v[i]);
      }
      return s.empty() ? std::string("-") : s;
    };
    std::vector<std::uint32_t> init(a.initial().begin(), a.initial().end());
    out << "states " << a.state_count() << " initial " << join(init)
        << " final " << join(a.finals()) << '\n';
    for (auto const& arrow : a.arrows()) {
      out << arrow.source << ' '
          << (arrow.label == epsilon
                  ? std::string("eps")
                  : alphabet.letter_name(
                      Letter(static_cast<std::uint32_t>(arrow.label))))
          << ' ' << arrow.target << '\n';
    }
    return out.str();
  }

  Automaton from_text(std::string_view text, Alphabet const& alphabet) {
    std::istringstream in{std::string(text)};
    std::string        tag_states, tag_initial, tag_final, initial, finals;
    std::size_t        n = 0;
    if (!(in >> tag_states >> n >> tag_initial >> initial >> tag_final
          >> finals)
        || tag_states != "states" || tag_initial != "initial"
        || tag_final != "final") {
      throw ParseError("automaton header must be \"states N initial I final "
                       "F1,F2\"");
    }
    Automaton a(alphabet.rank(), n);
    auto      split = [&](std::string const& list, auto&& apply) {
      if (list == "-") {
        return;
      }
      std::istringstream items(list);
      std::string        item;
      while (std::getline(items, item, ',')) {
        std::size_t s = 0;
        try {
          s = std::stoul(item);
        } catch (std::exception const&) {
          throw ParseError("bad state id \"" + item + "\"");
        }
        if (s >= n) {
          throw ParseError("state id " + item + " out of range");
        }
        apply(static_cast<std::uint32_t>(s));
      }
    };
    split(initial, [&](std::uint32_t s) { a.add_initial(s); });
    split(finals, [&](std::uint32_t s) { a.set_final(s); });
    std::size_t src = 0, dst = 0;
    std::string label;
    while (in >> src >> label >> dst) {
      if (src >= n || dst >= n) {
        throw ParseError("arrow endpoint out of range");
      }
      if (label == "eps") {
        a.add_epsilon(static_cast<std::uint32_t>(src),
                      static_cast<std::uint32_t>(dst));
        continue;
      }
      Word w = alphabet.parse(label);
      if (w.length() != 1) {
        throw ParseError("arrow label must be a single letter: " + label);
      }
      a.add_arrow(static_cast<std::uint32_t>(src), w.front(),
                  static_cast<std::uint32_t>(dst));
    }
    if (!in.eof()) {
      throw ParseError("malformed arrow line in automaton text");
    }
    return a;
  }

}  // namespace coset_forge
