#pragma once

// Buchberger's algorithm (grevlex, X_0 > X_1 > ...) over F_p and Q with the
// coprime and chain criteria, returning the reduced basis.

#include <vector>

#include "twistforge/hyperform.hpp"

namespace twistforge {

inline constexpr int kMaxGroebnerVars = 8;

struct GroebnerStats {
  std::size_t pairs_considered = 0;
  std::size_t pairs_reduced = 0;
  std::size_t basis_peak = 0;
};

/// Reduced Groebner basis (monic) of the ideal generated by `gens`, which
/// must share a field that is Q or F_p.
std::vector<MPoly> groebner_basis(const std::vector<MPoly>& gens, GroebnerStats* stats = nullptr);

bool grevlex_greater(const Exponent& a, const Exponent& b);
Exponent grevlex_leading(const MPoly& f);

/// Remainder of f on division by `divisors` (grevlex, full reduction).
MPoly normal_form(const MPoly& f, const std::vector<MPoly>& divisors);

/// Checks that every S-polynomial of `basis` reduces to zero.
bool verify_groebner(const std::vector<MPoly>& basis);

}  // namespace twistforge
