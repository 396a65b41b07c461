#pragma once

// Noncommutative polynomials over {a,b} and {c,d} with exact integer
// coefficients, plus the cd-specific operators: the derivation G, the
// pyramid operator and the alpha_k polynomials.

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "posetlab/error.hpp"
#include "posetlab/linalg.hpp"

namespace posetlab {

enum class Alphabet { AB, CD };

/// A word stored as a packed bit string: bit i holds letter i (0 = a/c, 1 = b/d).
template <Alphabet A>
class Word {
 public:
  static constexpr int kMaxLength = 64;

  Word() = default;

  static Word from_string(std::string_view s) {
    Word w;
    for (char ch : s) w.push_back(letter_bit(ch));
    return w;
  }

  int length() const { return len_; }
  bool letter(int i) const { return (bits_ >> i) & 1u; }

  /// a, b and c have degree 1; d has degree 2.
  int degree() const {
    if constexpr (A == Alphabet::AB) return len_;
    else return len_ + std::popcount(bits_);
  }

  void push_back(bool bit) {
    if (len_ >= kMaxLength) throw Error(Errc::ParseError, "word longer than 64 letters");
    if (bit) bits_ |= std::uint64_t{1} << len_;
    ++len_;
  }

  Word operator+(const Word& o) const {
    if (len_ + o.len_ > kMaxLength) throw Error(Errc::ParseError, "word longer than 64 letters");
    Word w;
    w.bits_ = bits_ | (len_ == 64 ? 0 : (o.bits_ << len_));
    w.len_ = static_cast<std::uint8_t>(len_ + o.len_);
    return w;
  }

  /// Letters [from, from+count).
  Word slice(int from, int count) const {
    Word w;
    for (int i = 0; i < count; ++i) w.push_back(letter(from + i));
    return w;
  }

  static char letter_char(bool bit) {
    if constexpr (A == Alphabet::AB) return bit ? 'b' : 'a';
    else return bit ? 'd' : 'c';
  }

  static bool letter_bit(char ch) {
    if constexpr (A == Alphabet::AB) {
      if (ch == 'a') return false;
      if (ch == 'b') return true;
    } else {
      if (ch == 'c') return false;
      if (ch == 'd') return true;
    }
    throw Error(Errc::ParseError, std::string("letter '") + ch + "' outside the alphabet");
  }

  /// Plain letter string, e.g. "ccd".
  std::string str() const {
    std::string s;
    for (int i = 0; i < len_; ++i) s += letter_char(letter(i));
    return s;
  }

  /// Runs compressed with exponents, e.g. "c^2d".
  std::string pretty() const {
    std::string s;
    for (int i = 0; i < len_;) {
      int j = i;
      while (j < len_ && letter(j) == letter(i)) ++j;
      s += letter_char(letter(i));
      if (j - i > 1) s += "^" + std::to_string(j - i);
      i = j;
    }
    return s;
  }

  friend bool operator==(const Word& x, const Word& y) { return x.len_ == y.len_ && x.bits_ == y.bits_; }

  /// Degree-lexicographic order.
  friend bool operator<(const Word& x, const Word& y) {
    if (x.degree() != y.degree()) return x.degree() < y.degree();
    const int n = std::min(x.len_, y.len_);
    for (int i = 0; i < n; ++i)
      if (x.letter(i) != y.letter(i)) return !x.letter(i);
    return x.len_ < y.len_;
  }

 private:
  std::uint64_t bits_ = 0;
  std::uint8_t len_ = 0;
};

using AbWord = Word<Alphabet::AB>;
using CdWord = Word<Alphabet::CD>;

template <Alphabet A>
class NcPoly {
 public:
  using WordType = Word<A>;
  using Terms = std::map<WordType, Integer>;

  NcPoly() = default;
  NcPoly(long constant) {  // NOLINT: integers promote to constants
    if (constant != 0) terms_[WordType{}] = constant;
  }

  static NcPoly monomial(const WordType& w, const Integer& coeff = 1) {
    NcPoly p;
    if (coeff != 0) p.terms_[w] = coeff;
    return p;
  }
  static NcPoly letter(bool bit) {
    WordType w;
    w.push_back(bit);
    return monomial(w);
  }
  static NcPoly word(std::string_view letters) { return monomial(WordType::from_string(letters)); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Integer coeff(const WordType& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Integer(0) : it->second;
  }
  Integer coeff(std::string_view letters) const { return coeff(WordType::from_string(letters)); }

  void add_term(const WordType& w, const Integer& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Highest degree present; -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

  bool is_homogeneous(int deg) const {
    for (const auto& [w, c] : terms_)
      if (w.degree() != deg) return false;
    return true;
  }

  NcPoly& operator+=(const NcPoly& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  NcPoly& operator-=(const NcPoly& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  NcPoly& operator*=(const Integer& k) {
    if (k == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, c] : terms_) c *= k;
    return *this;
  }

  friend NcPoly operator+(NcPoly x, const NcPoly& y) { return x += y; }
  friend NcPoly operator-(NcPoly x, const NcPoly& y) { return x -= y; }
  friend NcPoly operator-(NcPoly x) { return x *= Integer(-1); }
  friend NcPoly operator*(NcPoly x, const Integer& k) { return x *= k; }
  friend NcPoly operator*(const Integer& k, NcPoly x) { return x *= k; }

  friend NcPoly operator*(const NcPoly& x, const NcPoly& y) {
    NcPoly out;
    for (const auto& [u, cu] : x.terms_)
      for (const auto& [v, cv] : y.terms_) out.add_term(u + v, cu * cv);
    return out;
  }

  friend bool operator==(const NcPoly& x, const NcPoly& y) { return x.terms_ == y.terms_; }

  /// Canonical text: degree-lex order, explicit '*', e.g. "c^2 + 4*d".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
      Integer mag = abs(c);
      if (first) {
        if (c < 0) os << '-';
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      if (w.length() == 0) {
        os << mag;
      } else {
        if (mag != 1) os << mag << '*';
        os << w.pretty();
      }
    }
    return os.str();
  }

 private:
  Terms terms_;
};

using AbPoly = NcPoly<Alphabet::AB>;
using CdPoly = NcPoly<Alphabet::CD>;

template <Alphabet A>
NcPoly<A> pow(const NcPoly<A>& p, int k) {
  NcPoly<A> out(1);
  for (int i = 0; i < k; ++i) out = out * p;
  return out;
}

namespace detail {

inline std::optional<Alphabet> infer_alphabet(std::string_view text) {
  std::optional<Alphabet> found;
  for (char ch : text) {
    std::optional<Alphabet> here;
    if (ch == 'a' || ch == 'b') here = Alphabet::AB;
    if (ch == 'c' || ch == 'd') here = Alphabet::CD;
    if (!here) continue;
    if (found && *found != *here) throw Error(Errc::ParseError, "mixed alphabets in polynomial");
    found = here;
  }
  return found;
}

template <Alphabet A>
NcPoly<A> parse_poly(std::string_view text) {
  std::string s;
  for (std::size_t k = 0; k < text.size(); ++k) {
    const auto ch = static_cast<unsigned char>(text[k]);
    if (!std::isspace(ch)) {
      s += text[k];
      continue;
    }
    // "3 3" or "c d" must not fuse into one token
    std::size_t next = k;
    while (next < text.size() && std::isspace(static_cast<unsigned char>(text[next]))) ++next;
    if (!s.empty() && next < text.size() && std::isalnum(static_cast<unsigned char>(s.back())) &&
        std::isalnum(static_cast<unsigned char>(text[next])))
      throw Error(Errc::ParseError, "whitespace inside a term");
    k = next - 1;
  }
  if (s.empty()) throw Error(Errc::ParseError, "empty polynomial");
  NcPoly<A> out;
  std::size_t i = 0;
  auto read_int = [&](Integer& v) {
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) return false;
    v = Integer(s.substr(i, j - i));
    i = j;
    return true;
  };
  bool first = true;
  while (i < s.size()) {
    Integer sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      if (s[i] == '-') sign = -1;
      ++i;
    } else if (!first) {
      throw Error(Errc::ParseError, "expected '+' or '-' at position " + std::to_string(i));
    }
    first = false;
    Integer coeff = 1;
    bool had_coeff = read_int(coeff);
    if (had_coeff && i < s.size() && s[i] == '*') ++i;
    Word<A> w;
    bool had_word = false;
    while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) {
      const bool bit = Word<A>::letter_bit(s[i]);
      ++i;
      int times = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        Integer e;
        if (!read_int(e)) throw Error(Errc::ParseError, "missing exponent");
        times = static_cast<int>(e.get_si());
      }
      for (int t = 0; t < times; ++t) w.push_back(bit);
      had_word = true;
      if (i < s.size() && s[i] == '*') ++i;
    }
    if (!had_coeff && !had_word) throw Error(Errc::ParseError, "malformed term in '" + s + "'");
    out.add_term(w, sign * coeff);
  }
  return out;
}

}  // namespace detail

inline AbPoly parse_ab(std::string_view text) { return detail::parse_poly<Alphabet::AB>(text); }
inline CdPoly parse_cd(std::string_view text) { return detail::parse_poly<Alphabet::CD>(text); }

inline AbPoly ab_a() { return AbPoly::letter(false); }
inline AbPoly ab_b() { return AbPoly::letter(true); }
inline CdPoly cd_c() { return CdPoly::letter(false); }
inline CdPoly cd_d() { return CdPoly::letter(true); }

/// All cd-words of the given degree, in degree-lex order.
inline std::vector<CdWord> cd_words(int degree) {
  std::vector<CdWord> out;
  if (degree < 0) return out;
  if (degree == 0) return {CdWord{}};
  CdWord c, d;
  c.push_back(false);
  d.push_back(true);
  for (const auto& w : cd_words(degree - 1)) out.push_back(c + w);
  for (const auto& w : cd_words(degree - 2)) out.push_back(d + w);
  std::sort(out.begin(), out.end());
  return out;
}

/// Substitute c = a+b, d = ab+ba.
inline AbPoly ab_expand(const CdPoly& p) {
  const AbPoly c = ab_a() + ab_b();
  const AbPoly d = ab_a() * ab_b() + ab_b() * ab_a();
  AbPoly out;
  for (const auto& [w, coeff] : p.terms()) {
    AbPoly term(1);
    for (int i = 0; i < w.length(); ++i) term = term * (w.letter(i) ? d : c);
    out += term * coeff;
  }
  return out;
}

namespace detail {

/// ab-word obtained by c -> a, d -> ba. Each cd-word of degree n has a
/// distinct such word, and the expansions restricted to these rows form a
/// unimodular system.
inline AbWord leading_ab_word(const CdWord& w) {
  AbWord out;
  for (int i = 0; i < w.length(); ++i) {
    if (w.letter(i)) {
      out.push_back(true);
      out.push_back(false);
    } else {
      out.push_back(false);
    }
  }
  return out;
}

}  // namespace detail

/// The unique cd-polynomial whose expansion is p. Throws NotExpressible when
/// p lies outside the span of the cd-monomials.
inline CdPoly cd_contract(const AbPoly& p) {
  if (p.is_zero()) return CdPoly{};
  const int n = p.terms().begin()->first.degree();
  if (!p.is_homogeneous(n)) throw Error(Errc::NotHomogeneous, "ab-polynomial is not homogeneous");
  const auto words = cd_words(n);
  const std::size_t k = words.size();
  std::vector<AbPoly> expansions;
  expansions.reserve(k);
  for (const auto& w : words) expansions.push_back(ab_expand(CdPoly::monomial(w)));
  QMatrix a(k, k);
  std::vector<Rational> rhs(k);
  for (std::size_t r = 0; r < k; ++r) {
    const AbWord row = detail::leading_ab_word(words[r]);
    rhs[r] = Rational(p.coeff(row));
    for (std::size_t c = 0; c < k; ++c) a(r, c) = Rational(expansions[c].coeff(row));
  }
  auto x = solve(a, rhs);
  if (!x) throw Error(Errc::NotExpressible, "singular cd system");
  CdPoly q;
  for (std::size_t c = 0; c < k; ++c) {
    if ((*x)[c] == 0) continue;
    if ((*x)[c].get_den() != 1) throw Error(Errc::NotExpressible, "non-integral cd coefficient");
    q.add_term(words[c], (*x)[c].get_num());
  }
  AbPoly residual = p;
  residual -= ab_expand(q);
  if (!residual.is_zero())
    throw Error(Errc::NotExpressible, "ab-polynomial " + p.to_string() + " has no cd form");
  return q;
}

/// Split an ab-polynomial of degree n as f + g*a with f of degree n and g of
/// degree n-1 both cd-expressible. Throws NotExpressible if no split exists.
inline std::pair<CdPoly, CdPoly> cd_split(const AbPoly& p, int n) {
  if (!p.is_homogeneous(n)) throw Error(Errc::NotHomogeneous, "ab-polynomial is not homogeneous");
  if (n == 0) return {cd_contract(p), CdPoly{}};
  const auto fw = cd_words(n);
  const auto gw = cd_words(n - 1);
  std::vector<AbPoly> cols;
  for (const auto& w : fw) cols.push_back(ab_expand(CdPoly::monomial(w)));
  for (const auto& w : gw) cols.push_back(ab_expand(CdPoly::monomial(w)) * ab_a());
  const std::size_t rows = std::size_t{1} << n;
  QMatrix a(rows, cols.size());
  std::vector<Rational> rhs(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    AbWord w;
    for (int i = 0; i < n; ++i) w.push_back((r >> i) & 1u);
    rhs[r] = Rational(p.coeff(w));
    for (std::size_t c = 0; c < cols.size(); ++c) a(r, c) = Rational(cols[c].coeff(w));
  }
  bool unique = false;
  auto x = solve(a, rhs, &unique);
  if (!x) throw Error(Errc::NotExpressible, "no split f + g*a for " + p.to_string());
  CdPoly f, g;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if ((*x)[c] == 0) continue;
    if ((*x)[c].get_den() != 1) throw Error(Errc::NotExpressible, "non-integral split coefficient");
    if (c < fw.size()) f.add_term(fw[c], (*x)[c].get_num());
    else g.add_term(gw[c - fw.size()], (*x)[c].get_num());
  }
  return {f, g};
}

/// The derivation with G(c) = d and G(d) = cd.
inline CdPoly derivation_G(const CdPoly& p) {
  CdPoly out;
  CdWord c, d, cd;
  c.push_back(false);
  d.push_back(true);
  cd = c + d;
  for (const auto& [w, coeff] : p.terms()) {
    for (int i = 0; i < w.length(); ++i) {
      const CdWord mid = w.letter(i) ? cd : d;
      out.add_term(w.slice(0, i) + mid + w.slice(i + 1, w.length() - i - 1), coeff);
    }
  }
  return out;
}

/// Pyr(w) = w*c + G(w): the cd-index of the pyramid.
inline CdPoly pyr_op(const CdPoly& p) { return p * cd_c() + derivation_G(p); }

/// alpha_0 = -1; alpha_2k = -[(c^2-2d)^k + c(c^2-2d)^(k-1)c]/2;
/// alpha_2k+1 = [(c^2-2d)^k c + c(c^2-2d)^k]/2.
inline CdPoly alpha(int k) {
  if (k < 0) throw Error(Errc::ElementOutOfRange, "alpha index must be non-negative");
  if (k == 0) return CdPoly(-1);
  const CdPoly c = cd_c();
  const CdPoly e = c * c - cd_d() * Integer(2);
  const int h = k / 2;
  CdPoly twice;
  if (k % 2 == 0) twice = -(pow(e, h) + c * pow(e, h - 1) * c);
  else twice = pow(e, h) * c + c * pow(e, h);
  CdPoly out;
  for (const auto& [w, coeff] : twice.terms()) {
    if (!mpz_divisible_ui_p(coeff.get_mpz_t(), 2))
      throw Error(Errc::NotExpressible, "alpha has a non-integral coefficient");
    out.add_term(w, coeff / 2);
  }
  return out;
}

/// a(b-a)^(k-1) + ((a-b)^(k-1) - a(a-b)^(k-2)(1+(-1)^k)) b; the last
/// summand only appears for even k.
inline AbPoly alpha_ab_form(int k) {
  if (k < 1) throw Error(Errc::ElementOutOfRange, "alpha_ab_form needs k >= 1");
  const AbPoly a = ab_a(), b = ab_b();
  AbPoly inner = pow(a - b, k - 1);
  if (k % 2 == 0) inner -= a * pow(a - b, k - 2) * Integer(2);
  return a * pow(b - a, k - 1) + inner * b;
}

/// Result of a coefficientwise comparison p <= q.
struct CoeffwiseComparison {
  bool holds = true;
  std::optional<CdWord> witness;  // first word (degree-lex) with p_w > q_w
  explicit operator bool() const { return holds; }
};

inline CoeffwiseComparison coeffwise_compare(const CdPoly& p, const CdPoly& q) {
  std::map<CdWord, int> words;
  for (const auto& [w, c] : p.terms()) words[w] = 0;
  for (const auto& [w, c] : q.terms()) words[w] = 0;
  for (const auto& [w, unused] : words)
    if (p.coeff(w) > q.coeff(w)) return {false, w};
  return {};
}

inline bool coeffwise_leq(const CdPoly& p, const CdPoly& q) { return coeffwise_compare(p, q).holds; }

inline bool has_nonnegative_coefficients(const CdPoly& p) {
  for (const auto& [w, c] : p.terms())
    if (c < 0) return false;
  return true;
}

}  // namespace posetlab
