#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "coset_forge/cli.hpp"
#include "coset_forge/coset.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace coset_forge;
using namespace coset_forge::test;
using nlohmann::json;

namespace {
  struct Result {
    int         status;
    std::string out;
    std::string err;
  };

  Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int                status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
  }

  std::vector<std::string> lines(std::string const& text) {
    std::vector<std::string> out;
    std::istringstream       in(text);
    for (std::string line; std::getline(in, line);) {
      out.push_back(line);
    }
    return out;
  }

  json schema(std::string const& name) {
    std::ifstream in(std::filesystem::path(COSET_FORGE_SCHEMA_DIR)
                     / (name + ".schema.json"));
    REQUIRE(in.good());
    return json::parse(in);
  }

  bool has_type(json const& value, std::string const& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "integer") return value.is_number_integer();
    if (type == "number") return value.is_number();
    if (type == "boolean") return value.is_boolean();
    if (type == "null") return value.is_null();
    return false;
  }

  // The subset of JSON Schema used by the shipped schemas.
  std::vector<std::string> violations(json const& value, json const& s,
                                      std::string const& where = "$") {
    std::vector<std::string> out;
    auto add = [&](std::vector<std::string> more) {
      out.insert(out.end(), more.begin(), more.end());
    };
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (auto const& t : s["type"]) {
          ok = ok || has_type(value, t);
        }
      } else {
        ok = has_type(value, s["type"]);
      }
      if (!ok) {
        out.push_back(where + ": wrong type");
        return out;
      }
    }
    if (s.contains("enum")
        && std::find(s["enum"].begin(), s["enum"].end(), value)
               == s["enum"].end()) {
      out.push_back(where + ": not in enum");
    }
    if (value.is_object()) {
      for (auto const& key : s.value("required", json::array())) {
        if (!value.contains(key.get<std::string>())) {
          out.push_back(where + ": missing " + key.get<std::string>());
        }
      }
      if (s.contains("minProperties") && value.size() < s["minProperties"]) {
        out.push_back(where + ": too few properties");
      }
      for (auto const& [key, item] : value.items()) {
        if (s.contains("properties") && s["properties"].contains(key)) {
          add(violations(item, s["properties"][key], where + "." + key));
        } else if (s.contains("additionalProperties")) {
          add(violations(item, s["additionalProperties"], where + "." + key));
        }
      }
    }
    if (value.is_array() && s.contains("items")) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        add(violations(value[i], s["items"],
                       where + "[" + std::to_string(i) + "]"));
      }
    }
    return out;
  }

  void check_schema(std::vector<std::string> args, std::string const& name) {
    args.push_back("--format");
    args.push_back("json");
    auto r = run(args);
    CAPTURE(args[0]);
    REQUIRE(r.status == cli::ok);
    auto v = violations(json::parse(r.out), schema(name));
    CHECK(v.empty());
    for (auto const& x : v) {
      MESSAGE(x);
    }
  }

  std::string const gens = "a^3,b^3,ab^2A,ba^3B,bab^2AB";
}  // namespace

TEST_CASE("malnormal") {
  auto r = run({"malnormal", "--gens", "a", "--f", "b"});
  CHECK(r.status == cli::ok);
  CHECK(r.out == "true\n");
  CHECK(run({"malnormal", "--gens", gens, "--f", "a"}).out == "false\n");
}

TEST_CASE("stabilizer of the worked example") {
  auto r = run({"stabilizer", "--gens", gens, "--f", "a"});
  REQUIRE(r.status == cli::ok);
  auto out = lines(r.out);
  REQUIRE(out.size() >= 2);
  CHECK(out[0] == "rank 3");
  std::vector<Word> listed;
  for (std::size_t i = 1; i < out.size(); ++i) {
    listed.push_back(w(out[i]));
  }
  auto from_cli = fold(listed, ab());
  auto expected = fold(ws("BBaaabb,aaa,bbbbbb"), ab());
  for (auto const& x : listed) {
    CHECK(accepts(expected, x));
  }
  for (auto const& x : ws("BBaaabb,aaa,bbbbbb")) {
    CHECK(accepts(from_cli, x));
  }
}

TEST_CASE("enumerate matches the brute coset ball") {
  auto r = run({"enumerate", "--automaton", "coset", "--gens", "a", "--f", "b",
                "--max-len", "3"});
  REQUIRE(r.status == cli::ok);
  std::vector<Word> listed;
  for (auto const& line : lines(r.out)) {
    listed.push_back(w(line));
  }
  auto ball = oracle::brute_coset_ball(ws("a"), w("b"), {3, 3}, 3);
  CHECK(listed == std::vector<Word>(ball.begin(), ball.end()));
}

TEST_CASE("reproduce") {
  auto r = run({"reproduce"});
  CHECK(r.status == cli::ok);
  CHECK(r.out.find("all fixtures match") != std::string::npos);
  CHECK(r.out.find("d1 a74 [m742] b42") != std::string::npos);

  auto bad = run({"reproduce", "--gens", "a^4,b^3,ab^2A,ba^3B,bab^2AB"});
  CHECK(bad.status == cli::domain_error);
  CHECK(bad.err.find("FixtureMismatch") != std::string::npos);
  CHECK(bad.err.find("h1") != std::string::npos);

  auto dir = std::filesystem::temp_directory_path() / "coset_forge_dot";
  std::filesystem::remove_all(dir);
  auto dot = run({"reproduce", "--format", "dot", "--out-dir", dir.string()});
  CHECK(dot.status == cli::ok);
  for (auto const* name : {"gamma_c.dot", "gamma_ca.dot", "cac_automaton.dot"}) {
    std::ifstream in(dir / name);
    std::string   first;
    std::getline(in, first);
    CHECK(first.rfind("digraph", 0) == 0);
  }
  auto inline_dot = run({"reproduce", "--format", "dot"});
  CHECK(inline_dot.out.find("digraph gamma_ca") != std::string::npos);
}

TEST_CASE("exit codes and JSON errors") {
  auto domain = run({"solve", "--gens", "a", "--f", "a"});
  CHECK(domain.status == cli::domain_error);
  CHECK(domain.err.find("RepresentativeInSubgroup") != std::string::npos);

  auto parse = run({"member", "--gens", "a^", "--word", "a"});
  CHECK(parse.status == cli::parse_error);
  CHECK(run({"frobnicate"}).status == cli::parse_error);
  CHECK(run({"member", "--gens", "a"}).status == cli::parse_error);

  auto j = run({"normal-form", "--gens", "a", "--f", "b", "--g", "abb",
                "--format", "json"});
  CHECK(j.status == cli::domain_error);
  auto body = json::parse(j.out);
  CHECK(body["error"] == "NotInCoset");
  CHECK(violations(body, schema("error")).empty());
}

TEST_CASE("outputs are deterministic and the seed is reported") {
  std::vector<std::string> args{"verify-k", "--gens", gens, "--f", "a",
                                "--samples", "50"};
  auto first = run(args);
  CHECK(first.status == cli::ok);
  CHECK(first.out == run(args).out);
  CHECK(lines(first.out)[0] == "seed 0");
  ::setenv("COSET_FORGE_SEED", "17", 1);
  auto seeded = run(args);
  ::unsetenv("COSET_FORGE_SEED");
  CHECK(lines(seeded.out)[0] == "seed 17");
  args.push_back("--seed");
  args.push_back("17");
  CHECK(run(args).out == seeded.out);
  CHECK(first.out.find("violation false") != std::string::npos);
}

TEST_CASE("JSON outputs follow the shipped schemas") {
  check_schema({"fold", "--gens", gens}, "graph");
  check_schema({"member", "--gens", gens, "--word", "aaa"}, "boolean");
  check_schema({"malnormal", "--gens", gens, "--f", "a"}, "boolean");
  check_schema({"nielsen", "--gens", gens}, "nielsen");
  check_schema({"pieces", "--gens", gens}, "pieces");
  check_schema({"stabilizer", "--gens", gens, "--f", "a"}, "stabilizer");
  check_schema({"essential", "--gens", "a^2,b^2"}, "essential");
  check_schema({"solve", "--gens", "a^2", "--f", "a", "--g", "a^3"}, "solve");
  check_schema({"normal-form", "--gens", gens, "--f", "a", "--g", "aaaabbb"},
               "normal_form");
  check_schema({"minrep", "--gens", "a", "--f", "aaab"}, "minrep");
  check_schema({"verify-k", "--gens", gens, "--f", "a", "--samples", "20"},
               "verify_k");
  check_schema({"automaton", "subgroup", "--gens", gens}, "automaton");
  check_schema({"automaton", "coset", "--gens", "a", "--f", "b"}, "automaton");
  check_schema({"automaton", "cone", "--w1", "a", "--w2", "b"}, "automaton");
  check_schema({"enumerate", "--automaton", "cone", "--w1", "a", "--w2", "b",
                "--max-len", "3"},
               "words");
  check_schema({"reproduce"}, "reproduce");
}

TEST_CASE("text outputs") {
  auto n = run({"nielsen", "--gens", gens});
  CHECK(lines(n.out)[3] == "h4 = baaaB = ba o a o aB");
  auto p = run({"pieces", "--gens", gens});
  CHECK(p.out.find("m742\taaa\ta|a|a\n") != std::string::npos);
  CHECK(p.out.find("a74\tBB\n") != std::string::npos);
  auto nf = run({"normal-form", "--gens", gens, "--f", "a", "--g", "aaaabbb"});
  CHECK(nf.out == "c aaa\nt bbb\n");
  CHECK(run({"minrep", "--gens", "a", "--f", "aaab"}).out == "b\n");
  CHECK(run({"member", "--gens", gens, "--word", "BBaaabb"}).out == "true\n");
  auto e = run({"essential", "--gens", "a^2"});
  CHECK(e.out == "a\tC_f = <aa>\n");
  auto s = run({"solve", "--gens", "a", "--f", "b", "--g", "aba"});
  CHECK(s.out == "kind singleton\nbase A a\nA a\n");
  auto cone = run({"automaton", "cone", "--w1", "a", "--w2", "b"});
  CHECK(cone.out.rfind("states ", 0) == 0);
  auto f = run({"fold", "--gens", "a^3"});
  CHECK(f.out == "vertices 3\nedges 3\nrank 1\n0 a 1\n1 a 2\n2 a 0\n");
}
