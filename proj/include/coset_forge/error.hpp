#ifndef COSET_FORGE_ERROR_HPP_
#define COSET_FORGE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace coset_forge {

  enum class ErrorCode {
    parse,
    not_geodesic,
    nielsen_violation,
    not_in_subgroup,
    identity_word,
    representative_in_subgroup,
    central_letter_unrespectable,
    not_in_coset,
    minimality_violated,
    k_bound_violated,
    fixture_mismatch,
    invalid_argument
  };

  //! Machine readable name, used by the CLI in JSON mode.
  std::string_view error_code_name(ErrorCode code) noexcept;

  class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, std::string const& what)
        : std::runtime_error(what), _code(code) {}

    [[nodiscard]] ErrorCode code() const noexcept {
      return _code;
    }

   private:
    ErrorCode _code;
  };

  // Parse errors map to a different CLI exit status than domain errors.
  class ParseError : public Error {
   public:
    explicit ParseError(std::string const& what)
        : Error(ErrorCode::parse, what) {}
  };

}  // namespace coset_forge

#endif  // COSET_FORGE_ERROR_HPP_
