#ifndef COSET_FORGE_TESTS_SUPPORT_HPP_
#define COSET_FORGE_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "coset_forge/word.hpp"

namespace coset_forge::test {

  inline Alphabet const& ab() {
    static Alphabet const alphabet(2);
    return alphabet;
  }

  inline Word w(std::string_view text) {
    return ab().parse(text);
  }

  inline std::vector<Word> ws(std::string_view text) {
    return ab().parse_list(text);
  }

  inline std::string str(Word const& x) {
    return ab().format(x);
  }

  inline std::vector<Word> five_generators() {
    return ws("a^3,b^3,ab^2A,ba^3B,bab^2AB");
  }

  //! Uniform random reduced word of the given length.
  inline Word random_word(std::mt19937_64& rng, std::size_t rank,
                          std::size_t length) {
    LetterString letters;
    std::uniform_int_distribution<std::uint32_t> pick(0, 2 * rank - 1);
    while (letters.size() < length) {
      Letter x(pick(rng));
      if (!letters.empty() && letters.back() == x.inverse()) {
        continue;
      }
      letters.push_back(x);
    }
    return Word::reduce(letters);
  }

}  // namespace coset_forge::test

#endif  // COSET_FORGE_TESTS_SUPPORT_HPP_
