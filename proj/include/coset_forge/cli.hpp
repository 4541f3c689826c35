#ifndef COSET_FORGE_CLI_HPP_
#define COSET_FORGE_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace coset_forge::cli {

  //! Exit statuses of run().
  inline constexpr int ok           = 0;
  inline constexpr int domain_error = 1;
  inline constexpr int parse_error  = 2;

  //! Runs one command line (without the program name). The seed defaults to
  //! the COSET_FORGE_SEED environment variable, or 0.
  int run(std::vector<std::string> const& args, std::ostream& out,
          std::ostream& err);

}  // namespace coset_forge::cli

#endif  // COSET_FORGE_CLI_HPP_
