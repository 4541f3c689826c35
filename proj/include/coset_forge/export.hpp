#ifndef COSET_FORGE_EXPORT_HPP_
#define COSET_FORGE_EXPORT_HPP_

// DOT and JSON renderings of graphs, automata and reports.

#include <string>
#include <string_view>

#include "json.hpp"

#include "coset_forge/automaton.hpp"
#include "coset_forge/coset.hpp"
#include "coset_forge/stallings.hpp"

namespace coset_forge {

  //! Basepoint double-circled; one arrow per positive edge labelled by its
  //! generator.
  std::string to_dot(SubgroupGraph const& g, Alphabet const& alphabet,
                     std::string_view name = "G");
  //! {"vertices": [...], "basepoint": 0, "edges": [{"src", "label", "dst"}]}
  nlohmann::json to_json(SubgroupGraph const& g, Alphabet const& alphabet);

  //! Initial states marked by a tail arrow, final states double-circled,
  //! epsilon arrows labelled "eps".
  std::string to_dot(Automaton const& a, Alphabet const& alphabet,
                     std::string_view name = "A");

  //! {M, p, k, samples, max_cn, witness_c, witness_d, violation} plus the
  //! seed, the minimised f and the surviving-letter statistics.
  nlohmann::json to_json(KReducedReport const& report,
                         Alphabet const&       alphabet);

}  // namespace coset_forge

#endif  // COSET_FORGE_EXPORT_HPP_
