#ifndef COSET_FORGE_WORD_HPP_
#define COSET_FORGE_WORD_HPP_

// Elements of a free group F(X) as freely reduced words over X and X^-1.
//
// A letter is packed as 2 * generator + sign, so that the natural integer
// order is a < a^-1 < b < b^-1 < ... and inversion flips the low bit. All
// enumeration and tie-breaking in the library relies on this order.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coset_forge {

  class Letter {
   public:
    constexpr Letter() noexcept = default;
    constexpr explicit Letter(std::uint32_t code) noexcept : _code(code) {}

    static constexpr Letter generator(std::uint32_t index,
                                      bool inverse = false) noexcept {
      return Letter(2 * index + (inverse ? 1 : 0));
    }

    [[nodiscard]] constexpr std::uint32_t code() const noexcept {
      return _code;
    }
    [[nodiscard]] constexpr std::uint32_t index() const noexcept {
      return _code >> 1;
    }
    [[nodiscard]] constexpr bool is_inverse() const noexcept {
      return (_code & 1U) != 0;
    }
    [[nodiscard]] constexpr int sign() const noexcept {
      return is_inverse() ? -1 : 1;
    }
    [[nodiscard]] constexpr Letter inverse() const noexcept {
      return Letter(_code ^ 1U);
    }

    constexpr auto operator<=>(Letter const&) const noexcept = default;

   private:
    std::uint32_t _code = 0;
  };

  //! Letter sequences that are not necessarily freely reduced.
  using LetterString = std::vector<Letter>;

  class Word {
   public:
    Word() = default;

    //! Free reduction of an arbitrary letter sequence.
    static Word reduce(std::span<Letter const> letters);
    static Word reduce(std::initializer_list<Letter> letters) {
      return reduce(std::span<Letter const>(letters.begin(), letters.size()));
    }
    static Word letter(Letter x) {
      Word w;
      w._letters.push_back(x);
      return w;
    }

    [[nodiscard]] std::size_t length() const noexcept {
      return _letters.size();
    }
    [[nodiscard]] bool empty() const noexcept {
      return _letters.empty();
    }
    [[nodiscard]] Letter operator[](std::size_t i) const noexcept {
      return _letters[i];
    }
    [[nodiscard]] Letter front() const noexcept {
      return _letters.front();
    }
    [[nodiscard]] Letter back() const noexcept {
      return _letters.back();
    }
    [[nodiscard]] auto begin() const noexcept {
      return _letters.begin();
    }
    [[nodiscard]] auto end() const noexcept {
      return _letters.end();
    }
    [[nodiscard]] std::span<Letter const> letters() const noexcept {
      return _letters;
    }

    [[nodiscard]] Word inverse() const;
    //! Letters [first, first + count), which is again reduced.
    [[nodiscard]] Word subword(std::size_t first, std::size_t count) const;
    [[nodiscard]] Word prefix(std::size_t count) const {
      return subword(0, count);
    }
    [[nodiscard]] Word suffix(std::size_t count) const {
      return subword(length() - count, count);
    }

    bool operator==(Word const&) const = default;
    //! Shortlex order.
    std::strong_ordering operator<=>(Word const& that) const;

   private:
    std::vector<Letter> _letters;
  };

  //! Reduced product u * v.
  Word multiply(Word const& u, Word const& v);
  Word multiply(std::span<Word const> factors);
  inline Word operator*(Word const& u, Word const& v) {
    return multiply(u, v);
  }

  //! Total number of cancelled letter pairs when forming a_1 ... a_n, that is
  //! (sum l(a_i) - l(a_1 ... a_n)) / 2. Always an integer on reduced inputs.
  std::size_t cn(std::span<Word const> factors);
  std::size_t cn(std::initializer_list<Word> factors);

  //! c^g = g^-1 c g.
  Word conjugate(Word const& c, Word const& g);

  //! Length of the longest common prefix of u^-1 and v, i.e. the number of
  //! letters cancelled in u * v.
  std::size_t cancellation(Word const& u, Word const& v) noexcept;

  //! For the concatenation of the factors, which positions survive free
  //! reduction when it is carried out left to right with a stack. Entry i of
  //! the result corresponds to factor i, letter by letter.
  std::vector<std::vector<bool>> surviving_letters(
      std::span<Word const> factors);

  struct WordHash {
    std::size_t operator()(Word const& w) const noexcept;
  };

  //! Generator names and the text syntax for words. Ranks up to 26 use the
  //! letters a..z (inverse A..Z); larger ranks use x1, x2, ... (inverse X1).
  class Alphabet {
   public:
    explicit Alphabet(std::size_t rank);

    [[nodiscard]] std::size_t rank() const noexcept {
      return _rank;
    }
    //! 2 * rank.
    [[nodiscard]] std::size_t letter_count() const noexcept {
      return 2 * _rank;
    }
    [[nodiscard]] std::string const& name(std::size_t generator) const {
      return _names[generator];
    }
    [[nodiscard]] std::string letter_name(Letter x) const;

    //! Accepts "aBa", "a^3b^-2", "x1X2", "1" and "" (identity). Throws
    //! ParseError on unknown symbols or generators outside the rank.
    [[nodiscard]] Word parse(std::string_view text) const;
    [[nodiscard]] std::vector<Word> parse_list(std::string_view text) const;
    //! Inverse of parse on reduced words; the identity prints as "1".
    [[nodiscard]] std::string format(Word const& w) const;
    [[nodiscard]] std::string format(std::span<Letter const> letters) const;

    bool operator==(Alphabet const& that) const noexcept {
      return _rank == that._rank;
    }

   private:
    std::size_t              _rank;
    std::vector<std::string> _names;
  };

}  // namespace coset_forge

template <>
struct std::hash<coset_forge::Word> : coset_forge::WordHash {};

#endif  // COSET_FORGE_WORD_HPP_
