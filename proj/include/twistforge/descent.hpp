#pragma once

// Companion matrices, cyclic cocycles, cyclic-algebra relations, the diagonal
// descent datum H_{f,alpha,d,n} and the F_a family with its Kummer cocycle.

#include <optional>
#include <vector>

#include "twistforge/certificate.hpp"
#include "twistforge/hyperform.hpp"
#include "twistforge/numfield.hpp"
#include "twistforge/projmatrix.hpp"

namespace twistforge {

/// a in the top-right corner, ones on the subdiagonal; size n+1.
ProjMatrix companion_C(const FieldPtr& K, const Elem& a, int n);
/// ones on the superdiagonal, a in the bottom-left corner; size n+1.
ProjMatrix companion_D(const FieldPtr& K, const Elem& a, int n);

/// sigma^k applied entrywise; entries are first embedded into G.top.
ProjMatrix galois_apply(const ProjMatrix& M, const CyclicGaloisDatum& G, int k = 1);
/// diag(b, sigma(b), ..., sigma^n(b)).
ProjMatrix S_matrix(const CyclicGaloisDatum& G, const Elem& b);

/// A 1-cocycle on <sigma> determined by its value at sigma.
struct Cocycle {
  CyclicGaloisDatum G;
  ProjMatrix value;
  json to_json() const;
  static Cocycle from_json(const json& j, const std::string& pointer = "");
};

/// f(sigma) * sigma(f(sigma)) * ... * sigma^(N-1)(f(sigma)) == I in PGL.
Certificate verify_cocycle(const Cocycle& c);

/// C_a S_b = sigma^{-1}(S_b) C_a and D_a S_b = sigma(S_b) D_a.
Certificate verify_cyclic_algebra_relations(const CyclicGaloisDatum& G, const Elem& a, const Elem& b);

/// lambda_0 with f = t^(n+1) + ... + (-1)^(n+1) lambda_0.
Elem lambda0_of(const CyclicGaloisDatum& G);

struct NormIdentity {
  Elem norm;     // N(alpha / lambda_0), in the base
  Elem beta_d;   // beta^d
  bool holds = false;
  std::optional<int> exponent;  // e with beta^e = norm, when one exists (beta rational)
  json to_json(const Field& base) const;
};

NormIdentity norm_identity(const CyclicGaloisDatum& G, const Elem& alpha, const Elem& beta, int d);
/// Smallest e >= 0 with beta^e = N(alpha / lambda_0) for rational beta != 0, +-1.
std::optional<int> norm_exponent(const CyclicGaloisDatum& G, const Elem& alpha, const Elem& beta);

/// H(phi X) == lambda * sigma(H)(X), coefficient by coefficient.
Certificate verify_covariance(const HomForm& H, const ProjMatrix& phi, const CyclicGaloisDatum& G, const Elem& lambda);

struct DescentDatum {
  CyclicGaloisDatum G;
  Elem alpha;   // in G.top
  Elem beta;    // in G.base()
  Elem lambda0; // in G.base()
  int d = 0;
  HomForm H;
  ProjMatrix phi;               // C_beta
  Elem lambda;                  // alpha / lambda0
  std::vector<Elem> ledger;     // lambda, sigma(lambda), ..., sigma^n(lambda)
  NormIdentity identity;
  std::vector<Certificate> certificates;
  std::vector<std::string> warnings;

  bool all_passed() const;
  json to_json() const;
};

/// Builds and verifies the datum. Throws Error on norm identity failure
/// (both sides in the witness), DomainError for alpha in the base.
DescentDatum build_H_f_alpha(const CyclicGaloisDatum& G, const Elem& alpha, const Elem& beta, int d);

/// sum X_i^(2p) + a sum_{i<j} X_i^p X_j^p over the field of a.
HomForm build_family_Fa(int n, unsigned p, const NFElem& a);

struct KummerCocycle {
  CyclicGaloisDatum G;  // Gal(k(m^(1/p))/k), sigma(r) = zeta_p r
  Cocycle cocycle;
  Certificate certificate;
  json to_json() const;
};

/// Requires t^p - m to have no root in k (DomainError with the root
/// otherwise). The cocycle check itself may fail; it is reported, not thrown.
KummerCocycle kummer_cocycle(unsigned p, const NFElem& m, const ProjMatrix& phi);

}  // namespace twistforge
