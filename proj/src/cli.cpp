#include "coset_forge/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "coset_forge/automaton.hpp"
#include "coset_forge/coset.hpp"
#include "coset_forge/error.hpp"
#include "coset_forge/export.hpp"
#include "coset_forge/pieces.hpp"

namespace coset_forge::cli {

  namespace {
    using nlohmann::json;

    enum class Format { text, json, dot };

    struct JobConfig {
      std::size_t   rank = 0;
      std::string   gens;
      std::string   f;
      std::string   g;
      std::string   word;
      std::string   w1;
      std::string   w2;
      std::string   automaton = "coset";
      Format        format    = Format::text;
      std::size_t   max_len   = 6;
      std::uint64_t seed      = 0;
      std::size_t   samples   = 1000;
      std::size_t   max_y_len = 0;
      std::string   out_dir;
    };

    std::string const default_generators = "a^3,b^3,ab^2A,ba^3B,bab^2AB";

    // Rank given explicitly, else the largest generator mentioned (at
    // least 2).
    Alphabet alphabet_for(JobConfig const& cfg) {
      if (cfg.rank != 0) {
        return Alphabet(cfg.rank);
      }
      std::size_t rank = 2;
      for (auto const* s : {&cfg.gens, &cfg.f, &cfg.g, &cfg.word, &cfg.w1,
                            &cfg.w2}) {
        for (char c : *s) {
          if (std::isalpha(static_cast<unsigned char>(c))) {
            rank = std::max<std::size_t>(
                rank, std::tolower(static_cast<unsigned char>(c)) - 'a' + 1);
          }
        }
      }
      return Alphabet(rank);
    }

    std::string format_y(YWord const& y) {
      if (y.empty()) {
        return "1";
      }
      std::string out;
      for (std::size_t i = 0; i < y.size(); ++i) {
        out += (i ? " " : "") + ("y" + std::to_string(y[i]));
      }
      return out;
    }

    json automaton_json(Automaton const& a, Alphabet const& alphabet) {
      json arrows = json::array();
      for (auto const& arrow : a.arrows()) {
        arrows.push_back(
            {{"src", arrow.source},
             {"label", arrow.label == epsilon
                           ? std::string("eps")
                           : alphabet.letter_name(Letter(
                               static_cast<std::uint32_t>(arrow.label)))},
             {"dst", arrow.target}});
      }
      std::vector<std::uint32_t> initial(a.initial().begin(),
                                         a.initial().end());
      return {{"states", a.state_count()},
              {"initial", initial},
              {"final", a.finals()},
              {"arrows", arrows}};
    }

    json words_json(std::span<Word const> words, Alphabet const& alphabet) {
      json out = json::array();
      for (auto const& w : words) {
        out.push_back(alphabet.format(w));
      }
      return out;
    }

    void print_words(std::ostream& out, std::span<Word const> words,
                     Alphabet const& alphabet) {
      for (auto const& w : words) {
        out << alphabet.format(w) << '\n';
      }
    }

    class Runner {
     public:
      Runner(JobConfig const& cfg, std::ostream& out)
          : _cfg(cfg), _out(out), _alphabet(alphabet_for(cfg)) {}

      void fold() {
        auto g = coset_forge::fold(gens(), _alphabet);
        if (_cfg.format == Format::dot) {
          _out << to_dot(g, _alphabet, "subgroup");
        } else if (_cfg.format == Format::json) {
          _out << to_json(g, _alphabet).dump(2) << '\n';
        } else {
          _out << "vertices " << g.vertex_count() << "\nedges "
               << g.edge_count() << "\nrank " << g.subgroup_rank() << '\n';
          for (auto const& e : g.edges()) {
            _out << e.source << ' ' << _alphabet.name(e.generator) << ' '
                 << e.target << '\n';
          }
        }
      }

      void member() {
        auto g      = coset_forge::fold(gens(), _alphabet);
        bool result = accepts(g, parse(_cfg.word));
        emit_bool("member", result);
      }

      void nielsen() {
        Subgroup c = subgroup();
        auto const& b = c.basis();
        if (_cfg.format == Format::json) {
          json gens = json::array();
          for (auto const& h : b.generators()) {
            gens.push_back({{"h", _alphabet.format(h.h)},
                            {"s1", _alphabet.format(h.s1)},
                            {"mu", _alphabet.letter_name(h.mu)},
                            {"s2", _alphabet.format(h.s2)}});
          }
          _out << json{{"generators", gens},
                       {"M", b.M()},
                       {"p", b.p()},
                       {"k", b.k()}}
                      .dump(2)
               << '\n';
          return;
        }
        for (std::size_t i = 0; i < b.size(); ++i) {
          auto const& h = b.generators()[i];
          _out << "h" << i + 1 << " = " << _alphabet.format(h.h) << " = "
               << decomposition(h) << '\n';
        }
        _out << "M " << b.M() << "\np " << b.p() << "\nk " << b.k() << '\n';
      }

      void pieces() {
        Subgroup      c = subgroup();
        PieceAlphabet sigma(c.basis());
        json          rows = json::array();
        for (auto const& p : sigma.symbols()) {
          std::string split;
          if (p.kind == PieceKind::m) {
            auto const& m = sigma.m(p.indices[0], p.indices[1], p.indices[2]);
            split = _alphabet.format(m.alpha) + "|"
                    + _alphabet.letter_name(m.mu) + "|"
                    + _alphabet.format(m.beta);
          }
          if (_cfg.format == Format::json) {
            json row{{"symbol", p.name()},
                     {"word", _alphabet.format(sigma.word(p))}};
            if (!split.empty()) {
              row["split"] = split;
            }
            rows.push_back(row);
          } else {
            _out << p.name() << '\t' << _alphabet.format(sigma.word(p));
            if (!split.empty()) {
              _out << '\t' << split;
            }
            _out << '\n';
          }
        }
        if (_cfg.format == Format::json) {
          _out << rows.dump(2) << '\n';
        }
      }

      void stabilizer() {
        Subgroup c  = subgroup();
        auto     st = coset_forge::stabilizer(c.graph(), parse(_cfg.f));
        if (_cfg.format == Format::dot) {
          _out << to_dot(st, _alphabet, "stabilizer");
          return;
        }
        auto words = nielsen_basis(st).words();
        if (_cfg.format == Format::json) {
          _out << json{{"rank", st.subgroup_rank()},
                       {"generators", words_json(words, _alphabet)},
                       {"graph", to_json(st, _alphabet)}}
                      .dump(2)
               << '\n';
          return;
        }
        _out << "rank " << st.subgroup_rank() << '\n';
        print_words(_out, words, _alphabet);
      }

      void malnormal() {
        emit_bool("malnormal", is_f_malnormal(subgroup(), parse(_cfg.f)));
      }

      void essential() {
        Subgroup c      = subgroup();
        auto     cosets = essential_cosets(c);
        json     rows   = json::array();
        for (auto const& d : cosets) {
          auto words = nielsen_basis(d.stabilizer).words();
          if (_cfg.format == Format::json) {
            rows.push_back({{"representative", _alphabet.format(d.minimal_rep)},
                            {"stabilizer", words_json(words, _alphabet)}});
          } else {
            _out << _alphabet.format(d.minimal_rep) << "\tC_f = <";
            for (std::size_t i = 0; i < words.size(); ++i) {
              _out << (i ? ", " : "") << _alphabet.format(words[i]);
            }
            _out << ">\n";
          }
        }
        if (_cfg.format == Format::json) {
          _out << rows.dump(2) << '\n';
        }
      }

      void solve() {
        Subgroup    c = subgroup();
        Word        f = parse(_cfg.f);
        SolutionSet s = _cfg.g.empty() ? solve_uniform(c, f)
                                       : solve_equation(c, parse(_cfg.g), f);
        static char const* kinds[] = {"empty", "singleton", "parametrized"};
        auto               pairs   = s.enumerate(_cfg.max_len);
        if (_cfg.format == Format::json) {
          json rows = json::array();
          for (auto const& [x, y] : pairs) {
            rows.push_back({_alphabet.format(x), _alphabet.format(y)});
          }
          json out{{"kind", kinds[static_cast<int>(s.kind)]},
                   {"solutions", rows}};
          if (s.kind != SolutionSet::Kind::empty) {
            out["c1"] = _alphabet.format(s.c1);
            out["c2"] = _alphabet.format(s.c2);
          }
          _out << out.dump(2) << '\n';
          return;
        }
        _out << "kind " << kinds[static_cast<int>(s.kind)] << '\n';
        if (s.kind != SolutionSet::Kind::empty) {
          _out << "base " << _alphabet.format(s.c1) << ' '
               << _alphabet.format(s.c2) << '\n';
        }
        for (auto const& [x, y] : pairs) {
          _out << _alphabet.format(x) << ' ' << _alphabet.format(y) << '\n';
        }
      }

      void normal_form() {
        Subgroup   c  = subgroup();
        NormalForm nf = coset_forge::normal_form(c, parse(_cfg.f), parse(_cfg.g));
        if (_cfg.format == Format::json) {
          json out{{"c", _alphabet.format(nf.c)}, {"t", _alphabet.format(nf.t)}};
          if (!nf.t_expression.empty()) {
            out["t_expression"] = format_y(nf.t_expression);
          }
          _out << out.dump(2) << '\n';
          return;
        }
        _out << "c " << _alphabet.format(nf.c) << "\nt "
             << _alphabet.format(nf.t) << '\n';
      }

      void minrep() {
        Word w = minimal_representative(subgroup(), parse(_cfg.f));
        if (_cfg.format == Format::json) {
          _out << json{{"representative", _alphabet.format(w)}}.dump(2) << '\n';
        } else {
          _out << _alphabet.format(w) << '\n';
        }
      }

      void verify_k() {
        KReducedOptions options;
        options.samples      = _cfg.samples;
        options.seed         = _cfg.seed;
        options.max_y_length = _cfg.max_y_len;
        auto report = verify_k_reduced(subgroup(), parse(_cfg.f), options);
        json j      = to_json(report, _alphabet);
        if (_cfg.format == Format::json) {
          _out << j.dump(2) << '\n';
          return;
        }
        _out << "seed " << report.seed << '\n';
        for (auto const& key :
             {"f", "essential", "M", "p", "k", "samples", "max_cn",
              "violation", "max_cn_surviving", "surviving_samples",
              "surviving_violation", "max_sample_y_length"}) {
          _out << key << ' '
               << (j[key].is_string() ? j[key].get<std::string>()
                                      : j[key].dump())
               << '\n';
        }
      }

      Automaton build_automaton() {
        if (_cfg.automaton == "subgroup") {
          return subgroup().automaton();
        }
        if (_cfg.automaton == "cone") {
          return cone_automaton(parse(_cfg.w1), parse(_cfg.w2),
                                _alphabet.rank());
        }
        return double_coset_automaton(subgroup(), parse(_cfg.f)).automaton;
      }

      void automaton() {
        Automaton a = build_automaton();
        if (_cfg.format == Format::dot) {
          _out << to_dot(a, _alphabet, _cfg.automaton);
        } else if (_cfg.format == Format::json) {
          _out << automaton_json(a, _alphabet).dump(2) << '\n';
        } else {
          _out << to_text(a, _alphabet);
        }
      }

      void enumerate() {
        auto words = coset_forge::enumerate(build_automaton(), _cfg.max_len);
        if (_cfg.format == Format::json) {
          _out << words_json(words, _alphabet).dump(2) << '\n';
        } else {
          print_words(_out, words, _alphabet);
        }
      }

      void reproduce();

     private:
      std::vector<Word> gens() const {
        return _alphabet.parse_list(_cfg.gens);
      }
      Word parse(std::string const& s) const {
        return _alphabet.parse(s);
      }
      Subgroup subgroup() const {
        return Subgroup(coset_forge::fold(gens(), _alphabet));
      }
      std::string decomposition(NielsenGenerator const& h) const {
        return _alphabet.format(h.s1) + " o " + _alphabet.letter_name(h.mu)
               + " o " + _alphabet.format(h.s2.inverse());
      }
      void emit_bool(char const* key, bool value) {
        if (_cfg.format == Format::json) {
          _out << json{{key, value}}.dump(2) << '\n';
        } else {
          _out << (value ? "true" : "false") << '\n';
        }
      }

      JobConfig const& _cfg;
      std::ostream&    _out;
      Alphabet         _alphabet;
    };

    // Worked example of a five-generator subgroup of F(a,b): every stage is
    // compared with stored values and the first difference is reported.
    void Runner::reproduce() {
      nlohmann::ordered_json report;
      auto check = [&](std::string const& name, std::string const& actual,
                       std::string const& expected) {
        report[name] = actual;
        if (actual != expected) {
          throw Error(ErrorCode::fixture_mismatch,
                      name + ": expected " + expected + ", got " + actual);
        }
      };

      Subgroup c = subgroup();
      std::array<std::string, 5> const decompositions{
          "a o a o a", "b o b o b", "ab o b o A", "ba o a o aB",
          "bab o b o AB"};
      check("basis.size", std::to_string(c.basis().size()), "5");
      for (std::size_t i = 0; i < 5; ++i) {
        check("h" + std::to_string(i + 1),
              decomposition(c.basis().generators()[i]), decompositions[i]);
      }
      check("M", std::to_string(c.basis().M()), "4");
      check("p", std::to_string(c.basis().p()), "13121");
      check("k", std::to_string(c.basis().k()), "104968");

      PieceAlphabet sigma(c.basis());
      check("a11", _alphabet.format(sigma.a(1, 1)), "aaa");
      check("a74", _alphabet.format(sigma.a(7, 4)), "BB");
      check("m123", _alphabet.format(sigma.m(1, 2, 3).word), "bbb");
      check("m742", _alphabet.format(sigma.m(7, 4, 2).word), "aaa");
      check("b42", _alphabet.format(sigma.b(4, 2)), "bb");

      Word f  = _alphabet.parse("a");
      auto ca = coset_forge::stabilizer(c.graph(), f);
      std::vector<Word> z_words = _alphabet.parse_list("BBaaabb,aaa,bbbbbb");
      auto              z_graph = coset_forge::fold(z_words, _alphabet);
      bool              same    = true;
      for (auto const& w : z_words) {
        same = same && accepts(ca, w);
      }
      for (auto const& w : nielsen_basis(ca).words()) {
        same = same && accepts(z_graph, w);
      }
      check("C_a", same ? "<BBaaabb, aaa, bbbbbb>" : "different subgroup",
            "<BBaaabb, aaa, bbbbbb>");

      std::vector<YWord> z;
      for (auto const& w : z_words) {
        z.push_back(c.expression(w).value());
      }
      check("Z", format_y(z[0]) + ", " + format_y(z[1]) + ", " + format_y(z[2]),
            "y7 y4 y2, y1, y2 y2");
      auto transversal = relative_transversal(c.basis(), z);
      std::array<std::string, 3> const expected_d{"a74 [m742] b42", "[h1]",
                                                  "[a22] b22"};
      for (std::size_t i = 0; i < 3; ++i) {
        auto const& d = transversal.decompositions()[i];
        std::string s;
        for (auto const& p : d.prefix) {
          s += p.name() + " ";
        }
        s += "[" + d.centre.name() + "]";
        for (auto const& p : d.suffix) {
          s += " " + p.name();
        }
        check("d" + std::to_string(i + 1), s, expected_d[i]);
      }
      std::string internal;
      for (auto const& y : transversal.internal()) {
        internal += (internal.empty() ? "" : ", ") + format_y(y);
      }
      check("T_int", internal, "1, y7");
      auto const& d1 = transversal.decompositions()[0];
      auto const& d3 = transversal.decompositions()[2];
      check("T_int.pieces",
            "1, " + _alphabet.format(d1.prefix_word) + ", "
                + _alphabet.format(d1.suffix_word.inverse()) + ", "
                + _alphabet.format(d3.suffix_word),
            "1, BB, BB, bbb");

      auto dca = double_coset_automaton(c, f);
      check("CaC.essential", dca.essential ? "true" : "false", "true");
      check("CaC.representative", _alphabet.format(dca.representative), "a");
      check("CaC.agreed", dca.agreed ? "true" : "false", "true");
      report["CaC.states"] = dca.automaton.state_count();

      if (_cfg.format == Format::dot) {
        std::array<std::pair<std::string, std::string>, 3> files{
            std::pair{std::string("gamma_c.dot"),
                      to_dot(c.graph(), _alphabet, "gamma_c")},
            std::pair{std::string("gamma_ca.dot"),
                      to_dot(ca, _alphabet, "gamma_ca")},
            std::pair{std::string("cac_automaton.dot"),
                      to_dot(dca.automaton, _alphabet, "cac")}};
        for (auto const& [name, text] : files) {
          if (_cfg.out_dir.empty()) {
            _out << "// " << name << '\n' << text;
          } else {
            std::filesystem::create_directories(_cfg.out_dir);
            std::ofstream(std::filesystem::path(_cfg.out_dir) / name) << text;
            _out << "wrote " << (std::filesystem::path(_cfg.out_dir) / name).string()
                 << '\n';
          }
        }
      } else if (_cfg.format == Format::json) {
        report["status"] = "all fixtures match";
        _out << report.dump(2) << '\n';
      } else {
        for (auto const& [key, value] : report.items()) {
          _out << key << ' '
               << (value.is_string() ? value.get<std::string>() : value.dump())
               << '\n';
        }
        _out << "all fixtures match\n";
      }
    }

    std::uint64_t default_seed() {
      if (char const* env = std::getenv("COSET_FORGE_SEED")) {
        try {
          return std::stoull(env);
        } catch (std::exception const&) {
          throw ParseError("COSET_FORGE_SEED is not an unsigned integer");
        }
      }
      return 0;
    }
  }  // namespace

  int run(std::vector<std::string> const& args, std::ostream& out,
          std::ostream& err) {
    JobConfig cfg;
    CLI::App  app{"Double cosets of subgroups of free groups", "coset_forge"};
    app.require_subcommand(1);

    std::map<std::string, Format> const formats{
        {"text", Format::text}, {"json", Format::json}, {"dot", Format::dot}};

    std::function<void()> action;
    auto add = [&](std::string const& name, std::string const& help,
                   void (Runner::*method)()) {
      auto* sub = app.add_subcommand(name, help);
      sub->add_option("--rank", cfg.rank,
                      "Rank of the free group (default: inferred, at least 2)");
      sub->add_option("--format", cfg.format, "Output format")
          ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
      sub->callback([&, method] {
        action = [&, method] {
          Runner runner(cfg, out);
          (runner.*method)();
        };
      });
      return sub;
    };
    auto gens = [&](CLI::App* sub, bool required = true) {
      auto* o = sub->add_option("--gens", cfg.gens,
                                "Comma separated subgroup generators");
      if (required) {
        o->required();
      }
    };
    auto word_option = [&](CLI::App* sub, std::string const& name,
                           std::string& target, std::string const& help,
                           bool required = true) {
      auto* o = sub->add_option(name, target, help);
      if (required) {
        o->required();
      }
    };

    auto* fold = add("fold", "Folded subgroup graph", &Runner::fold);
    gens(fold);
    auto* member = add("member", "Subgroup membership", &Runner::member);
    gens(member);
    word_option(member, "--word", cfg.word, "Word to test");
    gens(add("nielsen", "Nielsen basis and M, p, k", &Runner::nielsen));
    gens(add("pieces", "Piece alphabet", &Runner::pieces));
    auto* stab = add("stabilizer", "C n f^-1 C f", &Runner::stabilizer);
    gens(stab);
    word_option(stab, "--f", cfg.f, "Representative");
    auto* mal = add("malnormal", "Is C f-malnormal", &Runner::malnormal);
    gens(mal);
    word_option(mal, "--f", cfg.f, "Representative");
    gens(add("essential", "Essential double cosets", &Runner::essential));
    auto* solve = add("solve", "Solutions of x g = f y", &Runner::solve);
    gens(solve);
    word_option(solve, "--f", cfg.f, "Representative");
    word_option(solve, "--g", cfg.g, "Right hand side (default: f)", false);
    solve->add_option("--max-len", cfg.max_len,
                      "Longest stabiliser element listed");
    auto* nf = add("normal-form", "g = c f t", &Runner::normal_form);
    gens(nf);
    word_option(nf, "--f", cfg.f, "Representative");
    word_option(nf, "--g", cfg.g, "Element of CfC");
    auto* minrep = add("minrep", "Shortest word of CfC", &Runner::minrep);
    gens(minrep);
    word_option(minrep, "--f", cfg.f, "Representative");
    auto* vk = add("verify-k", "Sampled cancellation bound", &Runner::verify_k);
    gens(vk);
    word_option(vk, "--f", cfg.f, "Representative");
    vk->add_option("--samples", cfg.samples, "Number of samples");
    vk->add_option("--seed", cfg.seed, "Seed (default: COSET_FORGE_SEED or 0)");
    vk->add_option("--max-y-len", cfg.max_y_len,
                   "Longest sampled Y-word (default: 2p + 2, capped)");

    auto automaton_kind = [&](CLI::App* sub) {
      sub->add_option("kind", cfg.automaton, "subgroup, coset or cone")
          ->check(CLI::IsMember({"subgroup", "coset", "cone"}));
      gens(sub, false);
      word_option(sub, "--f", cfg.f, "Representative", false);
      word_option(sub, "--w1", cfg.w1, "Cone prefix", false);
      word_option(sub, "--w2", cfg.w2, "Cone suffix", false);
    };
    automaton_kind(add("automaton", "Automaton as text, DOT or JSON",
                       &Runner::automaton));
    auto* en = add("enumerate", "Accepted words in shortlex order",
                   &Runner::enumerate);
    en->add_option("--automaton", cfg.automaton, "subgroup, coset or cone")
        ->check(CLI::IsMember({"subgroup", "coset", "cone"}));
    gens(en, false);
    word_option(en, "--f", cfg.f, "Representative", false);
    word_option(en, "--w1", cfg.w1, "Cone prefix", false);
    word_option(en, "--w2", cfg.w2, "Cone suffix", false);
    en->add_option("--max-len", cfg.max_len, "Longest word listed");
    auto* rep = add("reproduce", "Check the worked five-generator example",
                    &Runner::reproduce);
    rep->add_option("--gens", cfg.gens, "Override the generators");
    rep->add_option("--out-dir", cfg.out_dir, "Directory for DOT files");

    bool json_mode = std::find(args.begin(), args.end(), "json") != args.end();
    auto fail      = [&](ErrorCode code, std::string const& message) {
      if (json_mode) {
        out << json{{"error", error_code_name(code)}, {"message", message}}
                   .dump(2)
            << '\n';
      } else {
        err << "error: " << error_code_name(code) << ": " << message << '\n';
      }
      return code == ErrorCode::parse ? parse_error : domain_error;
    };

    try {
      cfg.seed = default_seed();
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
      if (cfg.gens.empty() && app.got_subcommand("reproduce")) {
        cfg.gens = default_generators;
      }
      bool needs_gens = cfg.automaton != "cone"
                        && (app.got_subcommand("automaton")
                            || app.got_subcommand("enumerate"));
      if (needs_gens && cfg.gens.empty()) {
        throw ParseError("--gens is required for this automaton");
      }
      if (needs_gens && cfg.automaton == "coset" && cfg.f.empty()) {
        throw ParseError("--f is required for the coset automaton");
      }
      action();
      return ok;
    } catch (CLI::CallForHelp const& e) {
      return app.exit(e, out, err);
    } catch (CLI::ParseError const& e) {
      return fail(ErrorCode::parse, e.what());
    } catch (ParseError const& e) {
      return fail(ErrorCode::parse, e.what());
    } catch (Error const& e) {
      return fail(e.code(), e.what());
    }
  }

}  // namespace coset_forge::cli
