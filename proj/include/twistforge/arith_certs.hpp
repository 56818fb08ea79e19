#pragma once

// Prime decomposition via the Dedekind criterion, unramified local norm
// tests and global non-norm certificates for cyclic extensions of Q.

#include <optional>
#include <vector>

#include "twistforge/nmod_poly.hpp"
#include "twistforge/numfield.hpp"

namespace twistforge {

struct DedekindResult {
  bool p_maximal = false;
  std::uint64_t p = 0;
  NmodPoly witness;  // gcd(F, g, h) mod p; 1 when p-maximal
  json to_json() const;
};

/// Dedekind criterion for monic integral f at p.
DedekindResult dedekind_p_maximal(const UPoly& f, std::uint64_t p);

struct PrimeSplitCertificate {
  std::uint64_t p = 0;
  FieldPtr field;
  Elem generator;
  UPoly minpoly;  // over Q, monic integral
  bool p_maximal = false;
  std::vector<NmodPoly> residue_factors;
  std::vector<int> ramification;    // e_i
  std::vector<int> residue_degrees; // f_i
  int candidates_tried = 0;

  bool unramified() const;
  /// The common residue degree; throws if the degrees differ.
  int residue_degree() const;
  json to_json() const;
};

/// Searches generators theta + c (|c| <= 20), then integral combinations
/// with coefficients in [-5, 5], then those combinations divided by p, p^2,
/// p^3 with integral characteristic polynomial. Throws SearchExhausted if no
/// p-maximal generator turns up; the certificate is never guessed.
PrimeSplitCertificate split_prime(const FieldPtr& K, std::uint64_t p);

/// Certificate for a given generator (used for re-verification). Throws if
/// the generator is not p-maximal or not primitive.
PrimeSplitCertificate split_prime_with(const FieldPtr& K, std::uint64_t p, const Elem& generator);

/// v_p(beta) = 0 mod f_p at an unramified p (Galois: one residue degree).
bool local_norm_unramified(const Rational& beta, const PrimeSplitCertificate& cert, const CyclicGaloisDatum& G);

struct NormObstructionCertificate {
  Rational beta;
  std::uint64_t p = 0;
  int residue_degree = 0;
  int valuation = 0;
  PrimeSplitCertificate split;
  json scanned;  // primes examined and why they did or did not obstruct
  json to_json() const;
};

/// Scans the primes dividing beta; throws Error("no obstruction found among
/// candidate primes") when none obstructs (inconclusive, not a norm proof).
NormObstructionCertificate non_norm_certificate(const Rational& beta, const CyclicGaloisDatum& G);

struct NormSearchResult {
  std::optional<Elem> element;
  Rational norm;
  int radius = 0;
  std::uint64_t examined = 0;
  json to_json(const Field& K) const;
};

/// Elements of Z[theta] \ Q with |N(x)| = target, scanning max-norm shells of
/// radius 1..bound in the power basis.
NormSearchResult find_element_of_norm(const FieldPtr& K, const Integer& target, int bound);

/// Characteristic polynomial of x over Q for K of height 1.
UPoly charpoly_over_Q(const FieldPtr& K, const Elem& x);

}  // namespace twistforge
