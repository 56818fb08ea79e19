#pragma once

// Dense univariate polynomials over a word-size prime field F_p and their
// factorization (squarefree decomposition, distinct-degree and
// Cantor-Zassenhaus equal-degree splitting).

#include <cstdint>
#include <tuple>
#include <utility>
#include <vector>

#include "twistforge/rational.hpp"

namespace twistforge {

/// Arithmetic in F_p for a prime p < 2^63.
class Zp {
 public:
  explicit Zp(std::uint64_t p);

  std::uint64_t p() const noexcept { return p_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  std::uint64_t neg(std::uint64_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const noexcept;
  std::uint64_t inv(std::uint64_t a) const;
  std::uint64_t from_signed(long long v) const noexcept;
  std::uint64_t from_integer(const Integer& z) const;

 private:
  std::uint64_t p_;
};

/// Coefficients constant term first; no trailing zeros (zero polynomial is
/// empty).
using NmodPoly = std::vector<std::uint64_t>;

namespace nmod {

void trim(NmodPoly& f);
int degree(const NmodPoly& f);
NmodPoly add(const Zp& F, const NmodPoly& a, const NmodPoly& b);
NmodPoly sub(const Zp& F, const NmodPoly& a, const NmodPoly& b);
NmodPoly mul(const Zp& F, const NmodPoly& a, const NmodPoly& b);
NmodPoly scale(const Zp& F, const NmodPoly& a, std::uint64_t c);
std::pair<NmodPoly, NmodPoly> divrem(const Zp& F, const NmodPoly& a, const NmodPoly& b);
NmodPoly rem(const Zp& F, const NmodPoly& a, const NmodPoly& b);
NmodPoly quo(const Zp& F, const NmodPoly& a, const NmodPoly& b);
NmodPoly monic(const Zp& F, const NmodPoly& a);
NmodPoly gcd(const Zp& F, NmodPoly a, NmodPoly b);
/// Returns (g, s, t) with s*a + t*b = g monic.
std::tuple<NmodPoly, NmodPoly, NmodPoly> xgcd(const Zp& F, const NmodPoly& a, const NmodPoly& b);
NmodPoly derivative(const Zp& F, const NmodPoly& a);
std::uint64_t eval(const Zp& F, const NmodPoly& a, std::uint64_t x);
NmodPoly mulmod(const Zp& F, const NmodPoly& a, const NmodPoly& b, const NmodPoly& m);
NmodPoly powmod(const Zp& F, const NmodPoly& a, const Integer& e, const NmodPoly& m);
NmodPoly from_integers(const Zp& F, const std::vector<Integer>& coeffs);

}  // namespace nmod

struct NmodFactor {
  NmodPoly factor;  // monic irreducible
  int multiplicity;
};

struct NmodFactorization {
  std::uint64_t leading = 0;
  std::vector<NmodFactor> factors;  // sorted by (degree, coefficients)
};

/// Complete factorization of a nonzero f over F_p. Deterministic: the
/// equal-degree splitting uses a fixed-seed generator.
NmodFactorization factor_mod_p(const Zp& F, const NmodPoly& f);

/// Squarefree decomposition f = lc * prod g_i^i (g_i monic, pairwise coprime).
std::vector<NmodFactor> squarefree_mod_p(const Zp& F, const NmodPoly& f);

bool is_irreducible_mod_p(const Zp& F, const NmodPoly& f);

/// Roots in F_p (each listed once), ascending.
std::vector<std::uint64_t> roots_mod_p(const Zp& F, const NmodPoly& f);

}  // namespace twistforge
