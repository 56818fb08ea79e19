#pragma once

// Runtime field data: Q, F_p, and simple algebraic extensions stacked on
// top of either (towers). Elements are plain values interpreted relative to
// a Field; the Field object owns the arithmetic.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "twistforge/errors.hpp"
#include "twistforge/rational.hpp"

namespace twistforge {

struct Elem;
using Coords = std::vector<Elem>;

/// A field element. Over Q and F_p it is a Rational (an integer in [0, p)
/// for F_p); over an extension of degree n it is n coordinates over the base
/// in the power basis 1, theta, ..., theta^(n-1).
struct Elem {
  std::variant<Rational, Coords> v;

  Elem() : v(Rational(0)) {}
  Elem(Rational q) : v(std::move(q)) {}  // NOLINT(google-explicit-constructor)
  explicit Elem(Coords c) : v(std::move(c)) {}

  bool is_scalar() const noexcept { return v.index() == 0; }
  const Rational& q() const { return std::get<Rational>(v); }
  const Coords& coords() const { return std::get<Coords>(v); }
  Coords& coords() { return std::get<Coords>(v); }
};

/// Univariate polynomial coefficients, constant term first, no trailing zeros.
using Poly = std::vector<Elem>;
using Matrix = std::vector<std::vector<Elem>>;

enum class FieldKind { rationals, prime, extension };

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
 public:
  static FieldPtr rationals();
  static FieldPtr prime_field(std::uint64_t p);
  /// Adjoins a root theta of `modulus` (monic over `base`). Irreducibility
  /// is the caller's responsibility; nf_create certifies it.
  static FieldPtr extension(FieldPtr base, Poly modulus, std::string label = "", std::string generator = "");

  FieldKind kind() const noexcept { return kind_; }
  bool is_rationals() const noexcept { return kind_ == FieldKind::rationals; }
  bool is_prime() const noexcept { return kind_ == FieldKind::prime; }
  bool is_extension() const noexcept { return kind_ == FieldKind::extension; }
  const FieldPtr& base() const noexcept { return base_; }
  const Poly& modulus() const noexcept { return modulus_; }
  int degree() const noexcept { return degree_; }
  int absolute_degree() const noexcept;
  int height() const noexcept;
  std::uint64_t characteristic() const noexcept;
  std::uint64_t prime() const noexcept { return p_; }
  const std::string& label() const noexcept { return label_; }
  const std::string& generator_name() const noexcept { return generator_; }
  /// The prime subfield (Q or F_p) at the bottom of the tower.
  const Field& ground() const noexcept;

  Elem zero() const;
  Elem one() const;
  Elem from_int(long long v) const;
  Elem from_integer(const Integer& z) const;
  Elem from_rational(const Rational& q) const;
  /// Class of t in base[t]/(modulus).
  Elem gen() const;
  /// Embeds an element of base() into this field.
  Elem embed(const Elem& base_elem) const;
  /// Embeds an element of `sub`, which must be this field or a field below it
  /// in the tower.
  Elem embed_from(const Field& sub, const Elem& e) const;
  Elem from_coords(Coords coords) const;
  /// Reduction of a base-coefficient polynomial in theta.
  Elem from_base_poly(const Poly& p) const;
  /// The coordinate polynomial of e (over base).
  Poly to_base_poly(const Elem& e) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem inv(const Elem& a) const;
  Elem div(const Elem& a, const Elem& b) const;
  Elem pow(const Elem& a, long long e) const;
  bool is_zero(const Elem& a) const;
  bool is_one(const Elem& a) const;
  bool eq(const Elem& a, const Elem& b) const;

  /// True when e lies in base() (all higher coordinates vanish).
  bool in_base(const Elem& e) const;
  Elem to_base(const Elem& e) const;
  /// The rational value when e lies in Q (char 0 only).
  std::optional<Rational> as_rational(const Elem& e) const;

  /// Multiplication-by-e matrix over base(); column j holds e * theta^j.
  Matrix mult_matrix(const Elem& e) const;
  Elem norm_to_base(const Elem& e) const;
  Elem trace_to_base(const Elem& e) const;
  /// det(x I - M_e) over base() (char 0).
  Poly charpoly_over_base(const Elem& e) const;
  /// Norm down to Q, one stage at a time.
  Rational absolute_norm(const Elem& e) const;
  /// Evaluates a polynomial with coefficients in base() at x in this field.
  Elem eval_base_poly(const Poly& coeffs, const Elem& x) const;

  std::string format(const Elem& e) const;
  std::string describe() const;
  json elem_to_json(const Elem& e) const;
  Elem elem_from_json(const json& j, const std::string& pointer = "") const;
  json to_json() const;
  static FieldPtr from_json(const json& j, const std::string& pointer = "");
  bool same_as(const Field& other) const;

  /// Uniform small element: integer coordinates in [-bound, bound].
  Elem random_elem(std::mt19937_64& rng, int bound) const;

 private:
  Field() = default;

  FieldKind kind_ = FieldKind::rationals;
  FieldPtr base_;
  Poly modulus_;
  int degree_ = 1;
  std::uint64_t p_ = 0;
  std::string label_;
  std::string generator_;
};

bool same_field(const FieldPtr& a, const FieldPtr& b);
void require_same_field(const FieldPtr& a, const FieldPtr& b, const char* where);

/// Dense univariate polynomial arithmetic over a Field.
class PolyRing {
 public:
  explicit PolyRing(const Field& F) : F_(F) {}
  const Field& field() const noexcept { return F_; }

  void trim(Poly& p) const;
  static int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }
  Poly constant(const Elem& c) const;
  Poly x() const;
  Poly from_ints(const std::vector<long long>& coeffs) const;
  Poly from_rationals(const std::vector<Rational>& coeffs) const;
  Poly add(const Poly& a, const Poly& b) const;
  Poly sub(const Poly& a, const Poly& b) const;
  Poly neg(const Poly& a) const;
  Poly mul(const Poly& a, const Poly& b) const;
  Poly scale(const Poly& a, const Elem& c) const;
  Poly pow(const Poly& a, unsigned e) const;
  std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) const;
  Poly rem(const Poly& a, const Poly& b) const;
  Poly quo(const Poly& a, const Poly& b) const;
  /// Quotient that must be exact; throws otherwise.
  Poly exact_quo(const Poly& a, const Poly& b) const;
  Poly monic(const Poly& a) const;
  Poly gcd(Poly a, Poly b) const;
  /// (g, s, t): s*a + t*b = g, g monic.
  std::tuple<Poly, Poly, Poly> xgcd(const Poly& a, const Poly& b) const;
  Poly derivative(const Poly& a) const;
  Elem eval(const Poly& a, const Elem& x) const;
  /// a(x + c).
  Poly shift(const Poly& a, const Elem& c) const;
  Poly mulmod(const Poly& a, const Poly& b, const Poly& m) const;
  bool eq(const Poly& a, const Poly& b) const;
  bool is_squarefree(const Poly& a) const;
  /// Embeds a poly over a subfield of the tower coefficientwise.
  Poly embed_from(const Field& sub, const Poly& a) const;

  std::string format(const Poly& a, const std::string& var = "x") const;
  json to_json(const Poly& a) const;
  Poly from_json(const json& j, const std::string& pointer = "") const;

 private:
  const Field& F_;
};

// Dense linear algebra over a Field.
Matrix identity_matrix(const Field& F, std::size_t n);
Matrix mat_mul(const Field& F, const Matrix& A, const Matrix& B);
Elem determinant(const Field& F, Matrix M);
/// Fraction-free (Bareiss) determinant.
Elem bareiss_determinant(const Field& F, Matrix M);
std::optional<Matrix> inverse(const Field& F, const Matrix& M);
bool mat_eq(const Field& F, const Matrix& A, const Matrix& B);

/// Interpolating polynomial through (xs[i], ys[i]) with distinct xs.
Poly interpolate(const Field& F, const std::vector<Elem>& xs, const std::vector<Elem>& ys);

/// Sylvester-matrix resultant, Bareiss elimination.
Elem resultant(const Field& F, const Poly& a, const Poly& b);
/// (-1)^(n(n-1)/2) Res(f, f') / lc(f).
Elem discriminant(const Field& F, const Poly& f);

/// Typed element: a value together with its field.
struct NFElem {
  FieldPtr field;
  Elem value;

  NFElem() = default;
  NFElem(FieldPtr f, Elem v) : field(std::move(f)), value(std::move(v)) {}
  static NFElem rational(FieldPtr f, const Rational& q) {
    auto v = f->from_rational(q);
    return {std::move(f), std::move(v)};
  }

  bool is_zero() const { return field->is_zero(value); }
  std::string str() const { return field->format(value); }
  json to_json() const { return field->elem_to_json(value); }
};

NFElem operator+(const NFElem& a, const NFElem& b);
NFElem operator-(const NFElem& a, const NFElem& b);
NFElem operator-(const NFElem& a);
NFElem operator*(const NFElem& a, const NFElem& b);
NFElem operator/(const NFElem& a, const NFElem& b);
bool operator==(const NFElem& a, const NFElem& b);
NFElem pow(const NFElem& a, long long e);

/// Typed univariate polynomial.
struct UPoly {
  FieldPtr field;
  Poly coeffs;

  UPoly() = default;
  UPoly(FieldPtr f, Poly c) : field(std::move(f)), coeffs(std::move(c)) { PolyRing(*field).trim(coeffs); }
  static UPoly over_q(const std::vector<long long>& coeffs);
  static UPoly over_q(const std::vector<Rational>& coeffs);

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.empty(); }
  std::string str(const std::string& var = "t") const { return PolyRing(*field).format(coeffs, var); }
  json to_json() const;
  static UPoly from_json(const json& j, FieldPtr field, const std::string& pointer = "");
};

bool operator==(const UPoly& a, const UPoly& b);
UPoly operator*(const UPoly& a, const UPoly& b);

/// Monic gcd; rejects operands over different fields.
UPoly upoly_gcd(const UPoly& a, const UPoly& b);
NFElem upoly_resultant(const UPoly& a, const UPoly& b);
NFElem upoly_discriminant(const UPoly& f);

}  // namespace twistforge
