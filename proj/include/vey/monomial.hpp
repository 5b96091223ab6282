#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vey {

// Hard limit on stored total degree; the packed key has seven variable slots.
inline constexpr int kMaxDegree = 7;
// Largest mode index representable in a packed key.
inline constexpr int kMaxMode = 127;

// Variable codes: 2*(j-1) stands for u_j, 2*(j-1)+1 for conj(u_j).
constexpr int var_code(int mode, bool conj) { return 2 * (mode - 1) + (conj ? 1 : 0); }
constexpr int var_mode(int code) { return code / 2 + 1; }
constexpr bool var_is_conj(int code) { return (code & 1) != 0; }

/// u^alpha conj(u)^beta as a sorted multiset of variable codes packed into 64 bits.
///
/// Layout: bits 56..63 hold the degree, byte 6 the smallest code (+1), byte 0 the
/// largest. Integer order on the key is graded lexicographic order.
class Monomial {
 public:
  Monomial() = default;

  static Monomial variable(int mode, bool conj) {
    check_mode(mode);
    Monomial m;
    m.key_ = (std::uint64_t{1} << 56) | (std::uint64_t(var_code(mode, conj) + 1) << 48);
    return m;
  }

  // Builds from arbitrary-order variable codes.
  static Monomial from_codes(std::vector<int> codes) {
    if (codes.size() > std::size_t(kMaxDegree)) throw std::length_error("monomial degree above limit");
    std::sort(codes.begin(), codes.end());
    Monomial m;
    m.key_ = std::uint64_t(codes.size()) << 56;
    for (std::size_t i = 0; i < codes.size(); ++i) {
      check_mode(var_mode(codes[i]));
      m.key_ |= std::uint64_t(codes[i] + 1) << (8 * (6 - i));
    }
    return m;
  }

  // Builds from dense exponent vectors (index 0 is mode 1).
  static Monomial from_exponents(const std::vector<int>& alpha, const std::vector<int>& beta) {
    std::vector<int> codes;
    for (std::size_t j = 0; j < alpha.size(); ++j)
      for (int e = 0; e < alpha[j]; ++e) codes.push_back(var_code(int(j) + 1, false));
    for (std::size_t j = 0; j < beta.size(); ++j)
      for (int e = 0; e < beta[j]; ++e) codes.push_back(var_code(int(j) + 1, true));
    for (int e : alpha) if (e < 0) throw std::invalid_argument("negative exponent");
    for (int e : beta) if (e < 0) throw std::invalid_argument("negative exponent");
    return from_codes(std::move(codes));
  }

  static Monomial from_key(std::uint64_t key) {
    Monomial m;
    m.key_ = key;
    return m;
  }

  std::uint64_t key() const { return key_; }
  int degree() const { return int(key_ >> 56); }
  int code(int i) const { return int((key_ >> (8 * (6 - i))) & 0xff) - 1; }

  std::vector<int> codes() const {
    std::vector<int> out(static_cast<std::size_t>(degree()));
    for (int i = 0; i < degree(); ++i) out[std::size_t(i)] = code(i);
    return out;
  }

  int alpha(int mode) const { return count(var_code(mode, false)); }
  int beta(int mode) const { return count(var_code(mode, true)); }
  int charge(int mode) const { return alpha(mode) - beta(mode); }
  int max_mode() const { return degree() == 0 ? 0 : var_mode(code(degree() - 1)); }

  // Sum over modes of mode * charge; zero-momentum monomials survive translations.
  int momentum() const {
    int p = 0;
    for (int i = 0; i < degree(); ++i) p += var_is_conj(code(i)) ? -var_mode(code(i)) : var_mode(code(i));
    return p;
  }

  int count(int c) const {
    int n = 0;
    for (int i = 0; i < degree(); ++i) n += code(i) == c;
    return n;
  }

  // Swaps alpha and beta.
  Monomial conj() const {
    std::vector<int> cs = codes();
    for (int& c : cs) c ^= 1;
    return from_codes(std::move(cs));
  }

  // Exponents merged onto alpha: |u|^(alpha+beta).
  Monomial merged() const {
    std::vector<int> cs = codes();
    for (int& c : cs) c &= ~1;
    return from_codes(std::move(cs));
  }

  std::optional<Monomial> times(const Monomial& o) const {
    const int d = degree() + o.degree();
    if (d > kMaxDegree) return std::nullopt;
    std::uint64_t key = std::uint64_t(d) << 56;
    int i = 0, k = 0;
    for (int s = 0; s < d; ++s) {
      int c;
      if (k >= o.degree() || (i < degree() && code(i) <= o.code(k))) c = code(i++);
      else c = o.code(k++);
      key |= std::uint64_t(c + 1) << (8 * (6 - s));
    }
    return from_key(key);
  }

  // Removes one factor with code c; returns the multiplicity and the quotient.
  std::pair<int, Monomial> derive(int c) const {
    const int n = count(c);
    if (n == 0) return {0, Monomial{}};
    std::vector<int> cs = codes();
    cs.erase(std::find(cs.begin(), cs.end(), c));
    return {n, from_codes(std::move(cs))};
  }

  auto operator<=>(const Monomial&) const = default;

  std::string to_string() const {
    if (degree() == 0) return "1";
    std::string s;
    for (int i = 0; i < degree(); ++i) {
      if (i) s += '*';
      s += var_is_conj(code(i)) ? "ub" : "u";
      s += std::to_string(var_mode(code(i)));
    }
    return s;
  }

 private:
  static void check_mode(int mode) {
    if (mode < 1 || mode > kMaxMode) throw std::out_of_range("mode index outside 1..127");
  }

  std::uint64_t key_ = 0;
};

}  // namespace vey
