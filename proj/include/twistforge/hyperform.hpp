#pragma once

// Sparse multivariate polynomials, homogeneous forms, linear substitution,
// Jacobians and smoothness certificates.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "twistforge/numfield.hpp"
#include "twistforge/projmatrix.hpp"

namespace twistforge {

using Exponent = std::vector<int>;

/// Sparse polynomial: exponent vector -> nonzero coefficient. Keys are
/// ordered lexicographically with X_0 > X_1 > ...
class MPoly {
 public:
  MPoly() = default;
  MPoly(FieldPtr field, int nvars) : field_(std::move(field)), nvars_(nvars) {}
  static MPoly monomial(FieldPtr field, const Exponent& e, const Elem& c);
  static MPoly variable(FieldPtr field, int nvars, int i);
  static MPoly constant(FieldPtr field, int nvars, const Elem& c);

  const FieldPtr& field() const noexcept { return field_; }
  int nvars() const noexcept { return nvars_; }
  const std::map<Exponent, Elem>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  /// Coefficient of X^e (zero if absent).
  Elem coeff(const Exponent& e) const;
  void add_term(const Exponent& e, const Elem& c);
  int total_degree() const;
  bool is_homogeneous(int d) const;

  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly operator*(const MPoly& o) const;
  MPoly scaled(const Elem& c) const;
  MPoly pow(unsigned e) const;
  MPoly derivative(int i) const;
  Elem eval(const std::vector<Elem>& point) const;
  bool operator==(const MPoly& o) const;

  /// Coefficientwise map into `target`.
  MPoly map(FieldPtr target, const std::function<Elem(const Elem&)>& f) const;
  MPoly embed_into(FieldPtr larger) const;

  json to_json() const;
  static MPoly from_json(const json& j, const FieldPtr& default_field, const std::string& pointer = "");
  std::string str() const;

 private:
  FieldPtr field_;
  int nvars_ = 0;
  std::map<Exponent, Elem> terms_;
};

/// Homogeneous form of degree d in n+1 variables.
class HomForm {
 public:
  HomForm() = default;
  /// Validates homogeneity and nonvanishing.
  HomForm(int n, int d, MPoly body);

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  const MPoly& body() const noexcept { return body_; }
  const FieldPtr& field() const noexcept { return body_.field(); }

  /// sum_i c_i X_i^d
  static HomForm diagonal(FieldPtr field, const std::vector<Elem>& coeffs, int d);
  static HomForm fermat(FieldPtr field, int n, int d);
  bool is_diagonal() const;
  HomForm embed_into(FieldPtr larger) const;
  HomForm scaled(const Elem& c) const;
  bool operator==(const HomForm& o) const { return n_ == o.n_ && d_ == o.d_ && body_ == o.body_; }

  json to_json() const;
  static HomForm from_json(const json& j, const FieldPtr& default_field = Field::rationals(),
                           const std::string& pointer = "");

 private:
  int n_ = 0;
  int d_ = 0;
  MPoly body_;
};

/// F(M X). The result lives in the larger of the two fields.
HomForm substitute(const HomForm& F, const ProjMatrix& M);
std::vector<MPoly> jacobian(const HomForm& F);
/// sum_i X_i dF/dX_i
MPoly euler_sum(const HomForm& F);

struct SmoothnessCertificate {
  std::string method;  // diagonal, good-prime, groebner-char0
  bool smooth = false;
  bool conclusive = true;
  std::uint64_t prime = 0;
  std::optional<DegreeOnePlace> place;  // when the form is over a number field
  std::string order = "grevlex";
  std::vector<Exponent> pure_powers;     // X_i^k_i found among leading monomials
  std::vector<Exponent> leading_monomials;
  std::optional<std::vector<std::uint64_t>> singular_point_mod_p;
  std::optional<std::vector<Elem>> singular_point;  // over the form's field
  json attempts = json::array();
  std::string note;
  json to_json(const Field& F) const;
};

/// Diagonal criterion: smooth iff every c_i != 0 (characteristic zero).
SmoothnessCertificate smooth_diagonal(const HomForm& F);

/// Reduction at p (forms over Q) or at a degree-one place (number fields):
/// smooth verdict is conclusive; a singular reduction is inconclusive.
SmoothnessCertificate smooth_good_prime(const HomForm& F, std::uint64_t p);
SmoothnessCertificate smooth_at_place(const HomForm& F, const DegreeOnePlace& place);

/// The fixed good-prime list, overridable by TWISTFORGE_PRIME_LIST
/// (comma-separated).
std::vector<std::uint64_t> good_prime_list();

/// Diagonal shortcut, then good primes (retrying), then a singular rational
/// point search, then characteristic-0 Buchberger for n <= 3, d <= 8 over Q.
SmoothnessCertificate certify_smooth(const HomForm& F);

/// Exact check that a point is singular on F.
bool is_singular_point(const HomForm& F, const std::vector<Elem>& point);

}  // namespace twistforge
