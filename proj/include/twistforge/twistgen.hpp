#pragma once

// Diagonal twists by Kummer representatives, the P = M D reduction, twist
// models from explicit matrices, and the splitting-condition evaluator.

#include <optional>
#include <string>
#include <vector>

#include "twistforge/certificate.hpp"
#include "twistforge/hyperform.hpp"
#include "twistforge/numfield.hpp"

namespace twistforge {

/// psi = diag(zeta_m^a_0, ..., zeta_m^a_n) with a_0 = 0.
struct DiagonalAutomorphism {
  int m = 1;
  std::vector<int> a;
  FieldPtr field;  // contains zeta_m
  Elem zeta;

  /// Rejects a_0 != 0 and exponent vectors giving order below m in PGL.
  /// `field` defaults to Q(zeta_m).
  static DiagonalAutomorphism make(int m, std::vector<int> a, FieldPtr field = nullptr);
  int n() const { return static_cast<int>(a.size()) - 1; }
  ProjMatrix matrix() const;
  ProjMatrix power(int k) const;
  json to_json() const;
  static DiagonalAutomorphism from_json(const json& j, const std::string& pointer = "");
};

/// w mod m with F(psi X) = zeta_m^w F(X). Throws Error naming the two
/// monomials whose weights disagree.
int form_weight(const HomForm& F, const DiagonalAutomorphism& psi);

struct TwistModel {
  std::string kind;  // "diagonal" or "matrix"
  HomForm base;      // F over k
  HomForm twisted;   // F' over k
  HomForm normalized;  // F' divided by its lexicographically first coefficient
  ProjMatrix D;        // isomorphism matrix over the root field
  std::optional<DiagonalAutomorphism> psi;
  std::optional<Elem> b;  // Kummer representative, in k
  int weight = 0;
  std::optional<UPoly> root_poly;  // defining polynomial of r over k
  bool root_in_k = false;
  std::optional<SmoothnessCertificate> smooth_base, smooth_twisted;
  std::vector<Certificate> certificates;

  bool all_passed() const;
  json to_json() const;
};

/// F' = r^-w F(D X) with D = diag(r^a_i), r^m = b. Throws DomainError for
/// b = 0 or zeta_m outside k.
TwistModel diagonal_twist(const HomForm& F, const DiagonalAutomorphism& psi, const NFElem& b, bool check_smooth = true);

/// When b_B / b_A = u^m for some u in k, returns E = diag(u^a_i) over k with
/// A.twisted(E X) proportional to B.twisted (verified); nullopt otherwise.
std::optional<ProjMatrix> kummer_isomorphism(const TwistModel& A, const TwistModel& B);

struct MDReduction {
  ProjMatrix M;  // over k
  ProjMatrix D;  // diagonal, over L
  std::vector<int> psi_powers;  // s_j with P^-1 sigma^j(P) = psi^s_j in PGL, j = 1..N-1
  Certificate certificate;
  json to_json() const;
};

/// Requires P^-1 sigma^j(P) in <psi> for every j (Error with the offending
/// power otherwise). Returns M over k and diagonal D with P = M D.
MDReduction reduce_P_to_MD(const ProjMatrix& P, const DiagonalAutomorphism& psi, const CyclicGaloisDatum& G);

/// F'(X) = F(M X) rescaled so that its lexicographically first coefficient is
/// 1; throws Error when a coefficient escapes k = F.field(). With G given,
/// sigma(M) M^-1 must match one of `automorphisms` in PGL (when nonempty).
TwistModel twist_model_from_matrix(const HomForm& F, const ProjMatrix& M,
                                   const std::optional<CyclicGaloisDatum>& G = std::nullopt,
                                   const std::vector<ProjMatrix>& automorphisms = {});

/// field_kind in {algebraically-closed, finite, curve-function-field,
/// Q-with-all-roots-of-unity, real, number-field, other}.
json splitting_conditions(int d, int n, const std::string& field_kind, std::optional<bool> has_rational_point = std::nullopt,
                          const json& beta_certificates = json::array());

}  // namespace twistforge
