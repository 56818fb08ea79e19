#pragma once

// Arbitrary-precision integers and rationals (GMP-backed) plus the small
// number-theoretic helpers the rest of the library leans on.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace twistforge {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "a", "-a", "a/b" (decimal). Throws ParseError on malformed input or
/// a zero denominator. The result is canonical.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

std::string to_string(const Integer& z);
std::string to_string(const Rational& q);

/// Deterministic Miller-Rabin with the first 13 prime bases; exact for
/// n < 3.3e24, which covers every modulus this library touches.
bool is_prime(const Integer& n);
bool is_prime(std::uint64_t n);

/// v_p(n) for nonzero n.
int valuation(const Integer& n, const Integer& p);
/// v_p(num) - v_p(den) for nonzero q.
int valuation(const Rational& q, const Integer& p);

bool is_perfect_square(const Integer& n);
Integer isqrt(const Integer& n);

/// Distinct prime divisors of |n| by trial division (n small at desk scale).
std::vector<Integer> prime_divisors(const Integer& n);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
Integer binomial(unsigned long n, unsigned long k);
std::uint64_t to_u64(const Integer& z);

/// Euler's totient of small m.
std::uint64_t euler_phi(std::uint64_t m);

/// Residue of q in F_p; throws if p divides the denominator.
std::uint64_t reduce_mod_p(const Rational& q, std::uint64_t p);

}  // namespace twistforge
