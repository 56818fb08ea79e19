#pragma once

// Factorization of univariate polynomials over Q: squarefree decomposition,
// mod-p degree patterns, Hensel lifting and subset recombination
// (Zassenhaus). No lattice reduction, so the cost of recombination grows
// with the number of modular factors; fine at desk scale.

#include <vector>

#include "twistforge/field.hpp"

namespace twistforge {

using ZPoly = std::vector<Integer>;

inline constexpr int kMaxFactorDegree = 128;

struct QFactor {
  UPoly factor;  // primitive integral, positive leading coefficient
  int multiplicity = 1;
};

struct QFactorization {
  Rational unit;
  std::vector<QFactor> factors;  // sorted by (degree, coefficients)
};

/// Complete factorization over Q. Throws for the zero polynomial and for
/// degree above kMaxFactorDegree.
QFactorization factor_over_Q(const UPoly& f);

/// How irreducibility over Q was decided.
struct IrreducibilityCertificate {
  bool irreducible = false;
  std::string method;  // "degree-1", "mod-p", "degree-pattern", "zassenhaus"
  std::vector<std::uint64_t> primes;
  std::vector<std::vector<int>> patterns;  // factor degrees mod each prime
  UPoly factor;                            // a proper factor when reducible
  json to_json() const;
};

IrreducibilityCertificate certify_irreducible_over_Q(const UPoly& f);

/// Primitive integral polynomial proportional to f (positive leading coefficient).
ZPoly primitive_part(const Field& Q, const Poly& f);
UPoly zpoly_to_upoly(const ZPoly& z);

/// Yun squarefree decomposition over Q: f = c * prod g_i^i.
std::vector<std::pair<ZPoly, int>> squarefree_over_Q(const ZPoly& f);

}  // namespace twistforge
