#pragma once

// Number fields as towers of height <= 2 over Q: certified construction,
// norms, root finding (Trager), cyclic Galois data, roots of unity and
// degree-one places.

#include <optional>
#include <vector>

#include "twistforge/cyclotomic.hpp"
#include "twistforge/field.hpp"
#include "twistforge/qfactor.hpp"

namespace twistforge {

inline constexpr int kMaxTowerHeight = 2;

/// Irreducibility of f over a field, decided either directly (Q) or through
/// a squarefree Trager norm.
struct FieldIrreducibility {
  bool irreducible = false;
  std::string method;  // "Q", "trager", "linear"
  int shift = 0;       // s in N(f(x - s*theta))
  int norm_degree = 0;
  UPoly norm;
  IrreducibilityCertificate norm_certificate;
  std::vector<UPoly> factors;  // monic factors over the field when reducible
  json to_json() const;
};

FieldIrreducibility certify_irreducible(const UPoly& f);

/// Base[t]/(f) after certifying f monic and irreducible over base. Throws
/// Error (with a factor witness) for reducible f. `f` may have coefficients
/// in any subfield of base.
FieldPtr nf_create(const UPoly& f, FieldPtr base, std::string label = "", std::string generator = "",
                   FieldIrreducibility* certificate = nullptr);

/// Q(zeta_m); Q for m <= 2.
FieldPtr cyclotomic(unsigned m);
/// zeta_m as an element of K (K must contain it as the cyclotomic generator
/// or be Q with m <= 2, or contain a cyclotomic base).
NFElem zeta(const FieldPtr& K, unsigned m);

/// N_{K/base}(x) by multiplication-matrix determinant.
NFElem nf_norm(const NFElem& x);

/// Monic irreducible factors of a squarefree f over its coefficient field.
std::vector<UPoly> factor_over_field(const UPoly& f);

/// Roots of squarefree f in K (coefficients of f in K or a subfield).
/// Each root is verified by exact evaluation. Throws Error with the gcd
/// witness if f is not squarefree.
std::vector<NFElem> roots_in_field(const UPoly& f, const FieldPtr& K);

struct CyclicGaloisDatum {
  FieldPtr top;
  Elem sigma_theta;  // sigma(theta) in top
  int order = 1;

  const FieldPtr& base() const { return top->base(); }
  Elem apply(const Elem& x) const;
  Elem apply_power(const Elem& x, int k) const;
  /// theta, sigma(theta), ..., sigma^(order-1)(theta).
  std::vector<Elem> orbit() const;
  json to_json() const;
  /// Re-verifies the cyclic structure of the stored data.
  static CyclicGaloisDatum from_json(const json& j, const std::string& pointer = "");

  std::vector<Elem> sigma_powers_;  // sigma(theta)^i, i < degree
};

/// Rebuilds the datum from an explicit sigma(theta), verifying that it is a
/// root of the defining polynomial with orbit length equal to the degree.
CyclicGaloisDatum make_cyclic_datum(FieldPtr K, Elem sigma_theta);

/// Certifies Gal(K/base) cyclic; `hint` is a candidate for sigma(theta).
CyclicGaloisDatum certify_cyclic(const FieldPtr& K, const std::optional<Elem>& hint = std::nullopt);

/// prod_i sigma^i(x), returned in the base field after checking it is fixed.
NFElem relative_norm(const NFElem& x, const CyclicGaloisDatum& G);

/// A ring map from the p-integral part of K onto F_p that is regular at each
/// level of the tower (simple roots of each defining polynomial).
struct DegreeOnePlace {
  FieldPtr field;
  std::uint64_t p = 0;
  std::vector<std::uint64_t> images;  // image of each generator, bottom level first

  /// Image of e; nullopt when e is not integral at the place.
  std::optional<std::uint64_t> reduce(const Elem& e) const;
  json to_json() const;
};

std::optional<DegreeOnePlace> degree_one_place(const FieldPtr& K, std::uint64_t p);
/// The first `count` primes >= start (optionally p = 1 mod `congruence`)
/// admitting a degree-one place.
std::vector<DegreeOnePlace> degree_one_places(const FieldPtr& K, std::size_t count, std::uint64_t start = 3,
                                              std::uint64_t congruence = 1, std::uint64_t limit = 100000);

/// All j with Phi_j having a root in K.
struct TorsionReport {
  std::vector<unsigned> orders;
  std::vector<unsigned> candidates;         // phi(j) | [K:Q]
  std::vector<std::uint64_t> filter_primes;  // degree-one places used to exclude candidates
  json to_json() const;
};

TorsionReport torsion_report(const FieldPtr& K);
std::vector<unsigned> torsion_roots_of_unity(const FieldPtr& K);

}  // namespace twistforge
