#include "coset_forge/word.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>

#include "coset_forge/error.hpp"

namespace coset_forge {

  std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
      case ErrorCode::parse:
        return "ParseError";
      case ErrorCode::not_geodesic:
        return "NotGeodesic";
      case ErrorCode::nielsen_violation:
        return "NielsenViolation";
      case ErrorCode::not_in_subgroup:
        return "NotInSubgroup";
      case ErrorCode::identity_word:
        return "IdentityWord";
      case ErrorCode::representative_in_subgroup:
        return "RepresentativeInSubgroup";
      case ErrorCode::central_letter_unrespectable:
        return "CentralLetterUnrespectable";
      case ErrorCode::not_in_coset:
        return "NotInCoset";
      case ErrorCode::minimality_violated:
        return "MinimalityViolated";
      case ErrorCode::k_bound_violated:
        return "KBoundViolated";
      case ErrorCode::fixture_mismatch:
        return "FixtureMismatch";
      case ErrorCode::invalid_argument:
        return "InvalidArgument";
    }
    return "Unknown";
  }

  ////////////////////////////////////////////////////////////////////////
  // Word
  ////////////////////////////////////////////////////////////////////////

  Word Word::reduce(std::span<Letter const> letters) {
    Word result;
    auto& out = result._letters;
    out.reserve(letters.size());
    for (Letter x : letters) {
      if (!out.empty() && out.back() == x.inverse()) {
        out.pop_back();
      } else {
        out.push_back(x);
      }
    }
    return result;
  }

  Word Word::inverse() const {
    Word result;
    result._letters.reserve(_letters.size());
    for (auto it = _letters.rbegin(); it != _letters.rend(); ++it) {
      result._letters.push_back(it->inverse());
    }
    return result;
  }

  Word Word::subword(std::size_t first, std::size_t count) const {
    assert(first + count <= length());
    Word result;
    result._letters.assign(_letters.begin() + first,
                           _letters.begin() + first + count);
    return result;
  }

  std::strong_ordering Word::operator<=>(Word const& that) const {
    if (auto c = length() <=> that.length(); c != 0) {
      return c;
    }
    return std::lexicographical_compare_three_way(_letters.begin(),
                                                  _letters.end(),
                                                  that._letters.begin(),
                                                  that._letters.end());
  }

  std::size_t WordHash::operator()(Word const& w) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Letter x : w) {
      h ^= x.code() + 1;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::size_t cancellation(Word const& u, Word const& v) noexcept {
    std::size_t n = std::min(u.length(), v.length());
    std::size_t i = 0;
    while (i < n && u[u.length() - 1 - i] == v[i].inverse()) {
      ++i;
    }
    return i;
  }

  Word multiply(Word const& u, Word const& v) {
    std::size_t  c = cancellation(u, v);
    LetterString letters;
    letters.reserve(u.length() + v.length() - 2 * c);
    letters.insert(letters.end(), u.begin(), u.end() - c);
    letters.insert(letters.end(), v.begin() + c, v.end());
    // No further cancellation is possible across the seam.
    return Word::reduce(letters);
  }

  Word multiply(std::span<Word const> factors) {
    LetterString letters;
    for (auto const& w : factors) {
      letters.insert(letters.end(), w.begin(), w.end());
    }
    return Word::reduce(letters);
  }

  std::size_t cn(std::span<Word const> factors) {
    std::size_t total = 0;
    for (auto const& w : factors) {
      total += w.length();
    }
    std::size_t reduced = multiply(factors).length();
    assert((total - reduced) % 2 == 0);
    return (total - reduced) / 2;
  }

  std::size_t cn(std::initializer_list<Word> factors) {
    return cn(std::span<Word const>(factors.begin(), factors.size()));
  }

  Word conjugate(Word const& c, Word const& g) {
    return multiply(std::initializer_list<Word>{g.inverse(), c, g});
  }

  std::vector<std::vector<bool>> surviving_letters(
      std::span<Word const> factors) {
    std::vector<std::vector<bool>> alive;
    alive.reserve(factors.size());
    struct Tagged {
      Letter      letter;
      std::size_t factor;
      std::size_t position;
    };
    std::vector<Tagged> stack;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      alive.emplace_back(factors[f].length(), true);
      for (std::size_t i = 0; i < factors[f].length(); ++i) {
        Letter x = factors[f][i];
        if (!stack.empty() && stack.back().letter == x.inverse()) {
          alive[stack.back().factor][stack.back().position] = false;
          alive[f][i]                                       = false;
          stack.pop_back();
        } else {
          stack.push_back({x, f, i});
        }
      }
    }
    return alive;
  }

  ////////////////////////////////////////////////////////////////////////
  // Alphabet
  ////////////////////////////////////////////////////////////////////////

  Alphabet::Alphabet(std::size_t rank) : _rank(rank) {
    if (rank == 0) {
      throw Error(ErrorCode::invalid_argument, "alphabet rank must be >= 1");
    }
    _names.reserve(rank);
    for (std::size_t i = 0; i < rank; ++i) {
      if (rank <= 26) {
        _names.emplace_back(1, static_cast<char>('a' + i));
      } else {
        _names.push_back("x" + std::to_string(i + 1));
      }
    }
  }

  std::string Alphabet::letter_name(Letter x) const {
    if (_rank <= 26) {
      char c = static_cast<char>('a' + x.index());
      return std::string(1, x.is_inverse() ? static_cast<char>(std::toupper(c))
                                           : c);
    }
    return (x.is_inverse() ? "X" : "x") + std::to_string(x.index() + 1);
  }

  namespace {
    std::string_view trim(std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
      }
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
      }
      return s;
    }

    bool read_int(std::string_view s, std::size_t& pos, long& out) {
      std::size_t start = pos;
      bool        neg   = false;
      if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
        neg = s[pos] == '-';
        ++pos;
      }
      std::size_t digits = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        ++pos;
      }
      if (digits == pos) {
        pos = start;
        return false;
      }
      long value = 0;
      std::from_chars(s.data() + digits, s.data() + pos, value);
      out = neg ? -value : value;
      return true;
    }
  }  // namespace

  Word Alphabet::parse(std::string_view text) const {
    std::string_view s = trim(text);
    if (s.empty() || s == "1") {
      return Word();
    }
    LetterString letters;
    std::size_t  pos = 0;
    while (pos < s.size()) {
      char        c = s[pos];
      std::size_t generator;
      bool        inverse;
      if (_rank <= 26) {
        if (!std::isalpha(static_cast<unsigned char>(c))) {
          throw ParseError("unexpected character '" + std::string(1, c)
                           + "' in word \"" + std::string(s) + "\"");
        }
        inverse   = std::isupper(static_cast<unsigned char>(c)) != 0;
        generator = static_cast<std::size_t>(
            std::tolower(static_cast<unsigned char>(c)) - 'a');
        ++pos;
      } else {
        if (c != 'x' && c != 'X') {
          throw ParseError("expected x<i> or X<i> in word \"" + std::string(s)
                           + "\"");
        }
        inverse = c == 'X';
        ++pos;
        long index = 0;
        if (!read_int(s, pos, index) || index < 1) {
          throw ParseError("bad generator index in word \"" + std::string(s)
                           + "\"");
        }
        generator = static_cast<std::size_t>(index - 1);
      }
      if (generator >= _rank) {
        throw ParseError("generator outside rank " + std::to_string(_rank)
                         + " in word \"" + std::string(s) + "\"");
      }
      long exponent = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        if (!read_int(s, pos, exponent)) {
          throw ParseError("bad exponent in word \"" + std::string(s) + "\"");
        }
      }
      Letter x = Letter::generator(static_cast<std::uint32_t>(generator),
                                   inverse);
      if (exponent < 0) {
        x        = x.inverse();
        exponent = -exponent;
      }
      letters.insert(letters.end(), static_cast<std::size_t>(exponent), x);
    }
    return Word::reduce(letters);
  }

  std::vector<Word> Alphabet::parse_list(std::string_view text) const {
    std::vector<Word> result;
    if (trim(text).empty()) {
      return result;
    }
    std::size_t start = 0;
    while (true) {
      std::size_t comma = text.find(',', start);
      result.push_back(parse(text.substr(start, comma - start)));
      if (comma == std::string_view::npos) {
        break;
      }
      start = comma + 1;
    }
    return result;
  }

  std::string Alphabet::format(std::span<Letter const> letters) const {
    if (letters.empty()) {
      return "1";
    }
    std::string out;
    for (Letter x : letters) {
      out += letter_name(x);
    }
    return out;
  }

  std::string Alphabet::format(Word const& w) const {
    return format(w.letters());
  }

}  // namespace coset_forge
