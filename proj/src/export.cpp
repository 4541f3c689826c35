#include "coset_forge/export.hpp"

#include <sstream>

namespace coset_forge {

  std::string to_dot(SubgroupGraph const& g, Alphabet const& alphabet,
                     std::string_view name) {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=LR;\n";
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
      out << "  " << v << " [shape="
          << (v == g.basepoint() ? "doublecircle" : "circle") << "];\n";
    }
    for (auto const& e : g.edges()) {
      out << "  " << e.source << " -> " << e.target << " [label=\""
          << alphabet.name(e.generator) << "\"];\n";
    }
    out << "}\n";
    return out.str();
  }

  nlohmann::json to_json(SubgroupGraph const& g, Alphabet const& alphabet) {
    nlohmann::json vertices = nlohmann::json::array();
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
      vertices.push_back(v);
    }
    nlohmann::json edges = nlohmann::json::array();
    for (auto const& e : g.edges()) {
      edges.push_back({{"src", e.source},
                       {"label", alphabet.name(e.generator)},
                       {"dst", e.target}});
    }
    return {{"vertices", vertices},
            {"basepoint", g.basepoint()},
            {"edges", edges}};
  }

  std::string to_dot(Automaton const& a, Alphabet const& alphabet,
                     std::string_view name) {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=LR;\n";
    for (std::uint32_t s = 0; s < a.state_count(); ++s) {
      out << "  " << s << " [shape="
          << (a.is_final(s) ? "doublecircle" : "circle") << "];\n";
    }
    for (auto s : a.initial()) {
      out << "  __start" << s << " [shape=none, label=\"\"];\n"
          << "  __start" << s << " -> " << s << ";\n";
    }
    for (auto const& arrow : a.arrows()) {
      out << "  " << arrow.source << " -> " << arrow.target << " [label=\""
          << (arrow.label == epsilon
                  ? std::string("eps")
                  : alphabet.letter_name(
                      Letter(static_cast<std::uint32_t>(arrow.label))))
          << "\"];\n";
    }
    out << "}\n";
    return out.str();
  }

  nlohmann::json to_json(KReducedReport const& report,
                         Alphabet const&       alphabet) {
    return {{"seed", report.seed},
            {"f", alphabet.format(report.f)},
            {"essential", report.essential},
            {"M", report.M},
            {"p", report.p},
            {"k", report.k},
            {"samples", report.samples},
            {"max_cn", report.max_cn},
            {"witness_c", alphabet.format(report.witness_c)},
            {"witness_d", alphabet.format(report.witness_d)},
            {"violation", report.violation},
            {"max_cn_surviving", report.max_cn_surviving},
            {"surviving_samples", report.surviving_samples},
            {"surviving_violation", report.surviving_violation},
            {"max_sample_y_length", report.max_sample_y_length}};
  }

}  // namespace coset_forge
