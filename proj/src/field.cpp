#include "twistforge/field.hpp"

#include <algorithm>
#include <sstream>

#include "twistforge/cyclotomic.hpp"

namespace twistforge {

namespace {

Rational mod_p(const Integer& v, std::uint64_t p) {
  Integer P = static_cast<unsigned long>(p);
  Integer r = v % P;
  if (r < 0) r += P;
  return Rational(r);
}

}  // namespace

FieldPtr Field::rationals() {
  static const FieldPtr q = [] {
    std::shared_ptr<Field> f(new Field());
    f->kind_ = FieldKind::rationals;
    f->label_ = "Q";
    return f;
  }();
  return q;
}

FieldPtr Field::prime_field(std::uint64_t p) {
  if (!twistforge::is_prime(p)) throw Error("composite modulus", json{{"p", p}});
  if (p >= (std::uint64_t{1} << 63)) throw Error("prime modulus out of range", json{{"p", p}});
  std::shared_ptr<Field> f(new Field());
  f->kind_ = FieldKind::prime;
  f->p_ = p;
  f->label_ = "F_" + std::to_string(p);
  return f;
}

FieldPtr Field::extension(FieldPtr base, Poly modulus, std::string label, std::string generator) {
  if (!base) throw Error("extension requires a base field");
  PolyRing R(*base);
  R.trim(modulus);
  if (PolyRing::degree(modulus) < 1) throw Error("defining polynomial must be nonconstant");
  if (!base->is_one(modulus.back())) throw Error("defining polynomial must be monic");
  std::shared_ptr<Field> f(new Field());
  f->kind_ = FieldKind::extension;
  f->degree_ = PolyRing::degree(modulus);
  f->modulus_ = std::move(modulus);
  f->base_ = std::move(base);
  f->label_ = std::move(label);
  if (generator.empty()) generator = f->base_->is_extension() ? "u" : "t";
  f->generator_ = std::move(generator);
  return f;
}

int Field::absolute_degree() const noexcept { return is_extension() ? degree_ * base_->absolute_degree() : 1; }

int Field::height() const noexcept { return is_extension() ? 1 + base_->height() : 0; }

std::uint64_t Field::characteristic() const noexcept { return ground().p_; }

const Field& Field::ground() const noexcept { return is_extension() ? base_->ground() : *this; }

Elem Field::zero() const {
  if (!is_extension()) return Elem(Rational(0));
  return Elem(Coords(degree_, base_->zero()));
}

Elem Field::one() const { return from_int(1); }

Elem Field::from_int(long long v) const {
  switch (kind_) {
    case FieldKind::rationals:
      return Elem(Rational(static_cast<long>(v)));
    case FieldKind::prime:
      return Elem(mod_p(Integer(static_cast<long>(v)), p_));
    case FieldKind::extension:
      return embed(base_->from_int(v));
  }
  return {};
}

Elem Field::from_integer(const Integer& z) const { return from_rational(Rational(z)); }

Elem Field::from_rational(const Rational& q) const {
  switch (kind_) {
    case FieldKind::rationals:
      return Elem(q);
    case FieldKind::prime:
      return Elem(Rational(static_cast<unsigned long>(reduce_mod_p(q, p_))));
    case FieldKind::extension:
      return embed(base_->from_rational(q));
  }
  return {};
}

Elem Field::gen() const {
  if (!is_extension()) throw DomainError("generator requested for a prime field");
  if (degree_ == 1) return embed(base_->neg(modulus_[0]));
  Coords c(degree_, base_->zero());
  c[1] = base_->one();
  return Elem(std::move(c));
}

Elem Field::embed(const Elem& base_elem) const {
  if (!is_extension()) throw DomainError("embed called on a prime field");
  Coords c(degree_, base_->zero());
  c[0] = base_elem;
  return Elem(std::move(c));
}

Elem Field::embed_from(const Field& sub, const Elem& e) const {
  if (same_as(sub)) return e;
  if (!is_extension()) throw DomainError("field " + sub.describe() + " is not a subfield of " + describe());
  return embed(base_->embed_from(sub, e));
}

Elem Field::from_coords(Coords coords) const {
  if (!is_extension()) throw DomainError("coordinates given for a prime field");
  if (static_cast<int>(coords.size()) > degree_) throw DomainError("too many coordinates");
  coords.resize(degree_, base_->zero());
  return Elem(std::move(coords));
}

Elem Field::from_base_poly(const Poly& p) const {
  PolyRing R(*base_);
  Poly r = R.rem(p, modulus_);
  r.resize(degree_, base_->zero());
  return Elem(std::move(r));
}

Poly Field::to_base_poly(const Elem& e) const {
  Poly p = e.coords();
  PolyRing(*base_).trim(p);
  return p;
}

Elem Field::add(const Elem& a, const Elem& b) const {
  switch (kind_) {
    case FieldKind::rationals:
      return Elem(Rational(a.q() + b.q()));
    case FieldKind::prime:
      return Elem(mod_p(a.q().get_num() + b.q().get_num(), p_));
    case FieldKind::extension: {
      Coords c(degree_);
      for (int i = 0; i < degree_; ++i) c[i] = base_->add(a.coords()[i], b.coords()[i]);
      return Elem(std::move(c));
    }
  }
  return {};
}

Elem Field::sub(const Elem& a, const Elem& b) const {
  switch (kind_) {
    case FieldKind::rationals:
      return Elem(Rational(a.q() - b.q()));
    case FieldKind::prime:
      return Elem(mod_p(a.q().get_num() - b.q().get_num(), p_));
    case FieldKind::extension: {
      Coords c(degree_);
      for (int i = 0; i < degree_; ++i) c[i] = base_->sub(a.coords()[i], b.coords()[i]);
      return Elem(std::move(c));
    }
  }
  return {};
}

Elem Field::neg(const Elem& a) const { return sub(zero(), a); }

Elem Field::mul(const Elem& a, const Elem& b) const {
  switch (kind_) {
    case FieldKind::rationals:
      return Elem(Rational(a.q() * b.q()));
    case FieldKind::prime:
      return Elem(mod_p(a.q().get_num() * b.q().get_num(), p_));
    case FieldKind::extension: {
      const Field& B = *base_;
      const auto& x = a.coords();
      const auto& y = b.coords();
      const int n = degree_;
      Coords prod(2 * n - 1, B.zero());
      for (int i = 0; i < n; ++i) {
        if (B.is_zero(x[i])) continue;
        for (int j = 0; j < n; ++j) {
          if (B.is_zero(y[j])) continue;
          prod[i + j] = B.add(prod[i + j], B.mul(x[i], y[j]));
        }
      }
      for (int k = 2 * n - 2; k >= n; --k) {
        if (B.is_zero(prod[k])) continue;
        const Elem c = prod[k];
        for (int j = 0; j < n; ++j) prod[k - n + j] = B.sub(prod[k - n + j], B.mul(c, modulus_[j]));
      }
      prod.resize(n);
      return Elem(std::move(prod));
    }
  }
  return {};
}

Elem Field::inv(const Elem& a) const {
  if (is_zero(a)) throw Error("division by zero in " + describe());
  switch (kind_) {
    case FieldKind::rationals:
      return Elem(Rational(1 / a.q()));
    case FieldKind::prime: {
      Integer P = static_cast<unsigned long>(p_);
      Integer r;
      mpz_invert(r.get_mpz_t(), a.q().get_num_mpz_t(), P.get_mpz_t());
      return Elem(Rational(r));
    }
    case FieldKind::extension: {
      PolyRing R(*base_);
      auto [g, s, t] = R.xgcd(to_base_poly(a), modulus_);
      if (PolyRing::degree(g) != 0) throw Error("element is a zero divisor: defining polynomial is reducible");
      return from_base_poly(s);
    }
  }
  return {};
}

Elem Field::div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

Elem Field::pow(const Elem& a, long long e) const {
  Elem base = e < 0 ? inv(a) : a;
  unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
  Elem r = one();
  while (k) {
    if (k & 1) r = mul(r, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return r;
}

bool Field::is_zero(const Elem& a) const {
  if (!is_extension()) return a.q() == 0;
  for (const auto& c : a.coords())
    if (!base_->is_zero(c)) return false;
  return true;
}

bool Field::is_one(const Elem& a) const { return eq(a, one()); }

bool Field::eq(const Elem& a, const Elem& b) const {
  if (!is_extension()) return a.q() == b.q();
  for (int i = 0; i < degree_; ++i)
    if (!base_->eq(a.coords()[i], b.coords()[i])) return false;
  return true;
}

bool Field::in_base(const Elem& e) const {
  if (!is_extension()) return true;
  for (int i = 1; i < degree_; ++i)
    if (!base_->is_zero(e.coords()[i])) return false;
  return true;
}

Elem Field::to_base(const Elem& e) const {
  if (!in_base(e)) throw DomainError("element does not lie in the base field");
  return e.coords()[0];
}

std::optional<Rational> Field::as_rational(const Elem& e) const {
  if (is_rationals()) return e.q();
  if (is_prime()) return std::nullopt;
  if (!in_base(e)) return std::nullopt;
  return base_->as_rational(e.coords()[0]);
}

Matrix Field::mult_matrix(const Elem& e) const {
  if (!is_extension()) return Matrix{{e}};
  Matrix M(degree_, std::vector<Elem>(degree_));
  Elem col = e;
  const Elem theta = gen();
  for (int j = 0; j < degree_; ++j) {
    for (int i = 0; i < degree_; ++i) M[i][j] = col.coords()[i];
    if (j + 1 < degree_) col = mul(col, theta);
  }
  return M;
}

Elem Field::norm_to_base(const Elem& e) const {
  if (!is_extension()) return e;
  return determinant(*base_, mult_matrix(e));
}

Elem Field::trace_to_base(const Elem& e) const {
  if (!is_extension()) return e;
  Matrix M = mult_matrix(e);
  Elem t = base_->zero();
  for (int i = 0; i < degree_; ++i) t = base_->add(t, M[i][i]);
  return t;
}

Poly Field::charpoly_over_base(const Elem& e) const {
  if (!is_extension()) return Poly{neg(e), one()};
  const Field& B = *base_;
  if (B.characteristic() != 0 && B.characteristic() <= static_cast<std::uint64_t>(degree_))
    throw Error("characteristic polynomial by interpolation needs more field elements");
  Matrix M = mult_matrix(e);
  std::vector<Elem> xs, ys;
  for (int c = 0; c <= degree_; ++c) {
    Matrix A = M;
    for (int i = 0; i < degree_; ++i)
      for (int j = 0; j < degree_; ++j) {
        A[i][j] = B.neg(A[i][j]);
        if (i == j) A[i][j] = B.add(A[i][j], B.from_int(c));
      }
    xs.push_back(B.from_int(c));
    ys.push_back(determinant(B, std::move(A)));
  }
  return interpolate(B, xs, ys);
}

Rational Field::absolute_norm(const Elem& e) const {
  if (is_rationals()) return e.q();
  if (is_prime()) throw DomainError("absolute norm requested over a finite field");
  return base_->absolute_norm(norm_to_base(e));
}

Elem Field::eval_base_poly(const Poly& coeffs, const Elem& x) const {
  Elem r = zero();
  for (std::size_t i = coeffs.size(); i-- > 0;) r = add(mul(r, x), embed(coeffs[i]));
  return r;
}

std::string Field::format(const Elem& e) const {
  if (!is_extension()) return to_string(e.q());
  std::vector<std::string> terms;
  for (int i = 0; i < degree_; ++i) {
    const Elem& c = e.coords()[i];
    if (base_->is_zero(c)) continue;
    std::string cs = base_->format(c);
    const bool compound = base_->is_extension() && cs.find_first_of("+-", 1) != std::string::npos;
    if (compound) cs = "(" + cs + ")";
    std::string mono = i == 0 ? "" : (i == 1 ? generator_ : generator_ + "^" + std::to_string(i));
    if (i == 0)
      terms.push_back(cs);
    else if (cs == "1")
      terms.push_back(mono);
    else if (cs == "-1")
      terms.push_back("-" + mono);
    else
      terms.push_back(cs + "*" + mono);
  }
  if (terms.empty()) return "0";
  std::string out = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i].front() == '-')
      out += " - " + terms[i].substr(1);
    else
      out += " + " + terms[i];
  }
  return out;
}

std::string Field::describe() const {
  if (is_rationals()) return "Q";
  if (is_prime()) return label_;
  if (!label_.empty()) return label_;
  return base_->describe() + "[" + generator_ + "]/(" + PolyRing(*base_).format(modulus_, generator_) + ")";
}

json Field::elem_to_json(const Elem& e) const {
  if (!is_extension()) return to_string(e.q());
  json arr = json::array();
  for (const auto& c : e.coords()) arr.push_back(base_->elem_to_json(c));
  return arr;
}

Elem Field::elem_from_json(const json& j, const std::string& pointer) const {
  if (j.is_number_integer()) return from_int(j.get<long long>());
  if (j.is_string()) {
    Rational q;
    try {
      q = parse_rational(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(e.what(), pointer);
    }
    return from_rational(q);
  }
  if (j.is_array()) {
    if (!is_extension()) throw ParseError("coordinate list given for an element of " + describe(), pointer);
    if (static_cast<int>(j.size()) > degree_)
      throw ParseError("too many coordinates for an element of " + describe(), pointer);
    Coords c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(base_->elem_from_json(j[i], pointer + "/" + std::to_string(i)));
    return from_coords(std::move(c));
  }
  throw ParseError("expected a coefficient string or coordinate list", pointer);
}

json Field::to_json() const {
  if (is_rationals()) return "Q";
  if (is_prime()) return json{{"prime", p_}};
  if (base_->is_rationals() && label_.rfind("cyclotomic(", 0) == 0) {
    return json{{"cyclotomic", std::stoul(label_.substr(11))}};
  }
  json poly = json::array();
  for (const auto& c : modulus_) poly.push_back(base_->elem_to_json(c));
  json j{{"base", base_->to_json()}, {"poly", poly}};
  if (!label_.empty()) j["label"] = label_;
  if (generator_ != "t" && generator_ != "u") j["generator"] = generator_;
  return j;
}

FieldPtr Field::from_json(const json& j, const std::string& pointer) {
  if (j.is_string()) {
    if (j.get<std::string>() == "Q") return rationals();
    throw ParseError("unknown field tag '" + j.get<std::string>() + "'", pointer);
  }
  if (!j.is_object()) throw ParseError("field must be \"Q\" or an object", pointer);
  if (j.contains("prime")) {
    if (!j["prime"].is_number_unsigned()) throw ParseError("prime must be a positive integer", pointer + "/prime");
    return prime_field(j["prime"].get<std::uint64_t>());
  }
  if (j.contains("cyclotomic")) {
    if (!j["cyclotomic"].is_number_unsigned() || j["cyclotomic"].get<unsigned>() == 0)
      throw ParseError("cyclotomic order must be a positive integer", pointer + "/cyclotomic");
    return cyclotomic_field(j["cyclotomic"].get<unsigned>());
  }
  if (!j.contains("base")) throw ParseError("missing 'base'", pointer);
  if (!j.contains("poly") || !j["poly"].is_array()) throw ParseError("missing 'poly' array", pointer + "/poly");
  FieldPtr base = from_json(j["base"], pointer + "/base");
  Poly mod = PolyRing(*base).from_json(j["poly"], pointer + "/poly");
  std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "";
  std::string gen = j.contains("generator") && j["generator"].is_string() ? j["generator"].get<std::string>() : "";
  try {
    return extension(base, std::move(mod), label, gen);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), pointer + "/poly");
  }
}

bool Field::same_as(const Field& other) const {
  if (this == &other) return true;
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case FieldKind::rationals:
      return true;
    case FieldKind::prime:
      return p_ == other.p_;
    case FieldKind::extension:
      if (degree_ != other.degree_ || !base_->same_as(*other.base_)) return false;
      for (int i = 0; i <= degree_; ++i)
        if (!base_->eq(modulus_[i], other.modulus_[i])) return false;
      return true;
  }
  return false;
}

Elem Field::random_elem(std::mt19937_64& rng, int bound) const {
  switch (kind_) {
    case FieldKind::rationals: {
      std::uniform_int_distribution<int> d(-bound, bound);
      return Elem(Rational(d(rng)));
    }
    case FieldKind::prime: {
      std::uniform_int_distribution<std::uint64_t> d(0, p_ - 1);
      return Elem(Rational(static_cast<unsigned long>(d(rng))));
    }
    case FieldKind::extension: {
      Coords c(degree_);
      for (auto& x : c) x = base_->random_elem(rng, bound);
      return Elem(std::move(c));
    }
  }
  return {};
}

bool same_field(const FieldPtr& a, const FieldPtr& b) { return a && b && (a == b || a->same_as(*b)); }

void require_same_field(const FieldPtr& a, const FieldPtr& b, const char* where) {
  if (!same_field(a, b))
    throw DomainError(std::string(where) + ": operands over different fields",
                      json{{"left", a ? a->describe() : "null"}, {"right", b ? b->describe() : "null"}});
}

// ---------------------------------------------------------------- PolyRing

void PolyRing::trim(Poly& p) const {
  while (!p.empty() && F_.is_zero(p.back())) p.pop_back();
}

Poly PolyRing::constant(const Elem& c) const {
  Poly p{c};
  trim(p);
  return p;
}

Poly PolyRing::x() const { return Poly{F_.zero(), F_.one()}; }

Poly PolyRing::from_ints(const std::vector<long long>& coeffs) const {
  Poly p;
  for (long long c : coeffs) p.push_back(F_.from_int(c));
  trim(p);
  return p;
}

Poly PolyRing::from_rationals(const std::vector<Rational>& coeffs) const {
  Poly p;
  for (const auto& c : coeffs) p.push_back(F_.from_rational(c));
  trim(p);
  return p;
}

Poly PolyRing::add(const Poly& a, const Poly& b) const {
  Poly r(std::max(a.size(), b.size()), F_.zero());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < a.size() && i < b.size())
      r[i] = F_.add(a[i], b[i]);
    else
      r[i] = i < a.size() ? a[i] : b[i];
  }
  trim(r);
  return r;
}

Poly PolyRing::sub(const Poly& a, const Poly& b) const {
  Poly r(std::max(a.size(), b.size()), F_.zero());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < a.size() && i < b.size())
      r[i] = F_.sub(a[i], b[i]);
    else
      r[i] = i < a.size() ? a[i] : F_.neg(b[i]);
  }
  trim(r);
  return r;
}

Poly PolyRing::neg(const Poly& a) const { return sub(Poly{}, a); }

Poly PolyRing::mul(const Poly& a, const Poly& b) const {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, F_.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (F_.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (F_.is_zero(b[j])) continue;
      r[i + j] = F_.add(r[i + j], F_.mul(a[i], b[j]));
    }
  }
  trim(r);
  return r;
}

Poly PolyRing::scale(const Poly& a, const Elem& c) const {
  Poly r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(F_.mul(x, c));
  trim(r);
  return r;
}

Poly PolyRing::pow(const Poly& a, unsigned e) const {
  Poly r = constant(F_.one());
  Poly base = a;
  while (e) {
    if (e & 1) r = mul(r, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return r;
}

std::pair<Poly, Poly> PolyRing::divrem(const Poly& a, const Poly& b) const {
  if (b.empty()) throw Error("polynomial division by zero");
  Poly r = a;
  if (r.size() < b.size()) return {{}, r};
  Poly q(r.size() - b.size() + 1, F_.zero());
  const Elem inv_lc = F_.inv(b.back());
  const bool monic_divisor = F_.is_one(b.back());
  for (std::size_t shift = q.size(); shift-- > 0;) {
    const Elem& top = r[shift + b.size() - 1];
    if (F_.is_zero(top)) continue;
    Elem c = monic_divisor ? top : F_.mul(top, inv_lc);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (F_.is_zero(b[j])) continue;
      r[shift + j] = F_.sub(r[shift + j], F_.mul(c, b[j]));
    }
    q[shift] = std::move(c);
  }
  trim(q);
  trim(r);
  return {q, r};
}

Poly PolyRing::rem(const Poly& a, const Poly& b) const { return divrem(a, b).second; }
Poly PolyRing::quo(const Poly& a, const Poly& b) const { return divrem(a, b).first; }

Poly PolyRing::exact_quo(const Poly& a, const Poly& b) const {
  auto [q, r] = divrem(a, b);
  if (!r.empty()) throw Error("inexact polynomial division");
  return q;
}

Poly PolyRing::monic(const Poly& a) const {
  if (a.empty() || F_.is_one(a.back())) return a;
  return scale(a, F_.inv(a.back()));
}

Poly PolyRing::gcd(Poly a, Poly b) const {
  while (!b.empty()) {
    Poly r = rem(a, b);
    a = std::move(b);
    b = monic(std::move(r));
  }
  return monic(a);
}

std::tuple<Poly, Poly, Poly> PolyRing::xgcd(const Poly& a, const Poly& b) const {
  Poly r0 = a, r1 = b, s0 = constant(F_.one()), s1, t0, t1 = constant(F_.one());
  while (!r1.empty()) {
    auto [q, r] = divrem(r0, r1);
    Poly s = sub(s0, mul(q, s1));
    Poly t = sub(t0, mul(q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
    t0 = std::move(t1);
    t1 = std::move(t);
  }
  if (r0.empty()) return {r0, s0, t0};
  Elem inv = F_.inv(r0.back());
  return {scale(r0, inv), scale(s0, inv), scale(t0, inv)};
}

Poly PolyRing::derivative(const Poly& a) const {
  if (a.size() <= 1) return {};
  Poly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = F_.mul(a[i], F_.from_int(static_cast<long long>(i)));
  trim(r);
  return r;
}

Elem PolyRing::eval(const Poly& a, const Elem& x) const {
  Elem r = F_.zero();
  for (std::size_t i = a.size(); i-- > 0;) r = F_.add(F_.mul(r, x), a[i]);
  return r;
}

Poly PolyRing::shift(const Poly& a, const Elem& c) const {
  Poly r;
  const Poly lin = {c, F_.one()};
  for (std::size_t i = a.size(); i-- > 0;) r = add(mul(r, lin), constant(a[i]));
  return r;
}

Poly PolyRing::mulmod(const Poly& a, const Poly& b, const Poly& m) const { return rem(mul(a, b), m); }

bool PolyRing::eq(const Poly& a, const Poly& b) const {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!F_.eq(a[i], b[i])) return false;
  return true;
}

bool PolyRing::is_squarefree(const Poly& a) const {
  if (degree(a) <= 0) return true;
  Poly d = derivative(a);
  if (d.empty()) return false;
  return degree(gcd(a, d)) == 0;
}

Poly PolyRing::embed_from(const Field& sub, const Poly& a) const {
  Poly r;
  r.reserve(a.size());
  for (const auto& c : a) r.push_back(F_.embed_from(sub, c));
  trim(r);
  return r;
}

std::string PolyRing::format(const Poly& a, const std::string& var) const {
  if (a.empty()) return "0";
  std::string out;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (F_.is_zero(a[i])) continue;
    std::string cs = F_.format(a[i]);
    const bool compound = F_.is_extension() && cs.find_first_of("+-", 1) != std::string::npos;
    bool negative = !compound && cs.front() == '-';
    if (negative) cs = cs.substr(1);
    if (compound) cs = "(" + cs + ")";
    std::string term;
    if (i == 0)
      term = cs;
    else {
      std::string mono = i == 1 ? var : var + "^" + std::to_string(i);
      term = cs == "1" ? mono : cs + "*" + mono;
    }
    if (out.empty())
      out = (negative ? "-" : "") + term;
    else
      out += (negative ? " - " : " + ") + term;
  }
  return out;
}

json PolyRing::to_json(const Poly& a) const {
  json arr = json::array();
  for (const auto& c : a) arr.push_back(F_.elem_to_json(c));
  return arr;
}

Poly PolyRing::from_json(const json& j, const std::string& pointer) const {
  if (!j.is_array()) throw ParseError("expected a coefficient array", pointer);
  Poly p;
  for (std::size_t i = 0; i < j.size(); ++i) p.push_back(F_.elem_from_json(j[i], pointer + "/" + std::to_string(i)));
  trim(p);
  return p;
}

// ---------------------------------------------------------- linear algebra

Matrix identity_matrix(const Field& F, std::size_t n) {
  Matrix I(n, std::vector<Elem>(n, F.zero()));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = F.one();
  return I;
}

Matrix mat_mul(const Field& F, const Matrix& A, const Matrix& B) {
  const std::size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
  Matrix C(n, std::vector<Elem>(m, F.zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (F.is_zero(A[i][l])) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (F.is_zero(B[l][j])) continue;
        C[i][j] = F.add(C[i][j], F.mul(A[i][l], B[l][j]));
      }
    }
  return C;
}

Elem determinant(const Field& F, Matrix M) {
  const std::size_t n = M.size();
  Elem det = F.one();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && F.is_zero(M[piv][k])) ++piv;
    if (piv == n) return F.zero();
    if (piv != k) {
      std::swap(M[piv], M[k]);
      det = F.neg(det);
    }
    det = F.mul(det, M[k][k]);
    const Elem inv = F.inv(M[k][k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (F.is_zero(M[i][k])) continue;
      const Elem factor = F.mul(M[i][k], inv);
      for (std::size_t j = k + 1; j < n; ++j) M[i][j] = F.sub(M[i][j], F.mul(factor, M[k][j]));
    }
  }
  return det;
}

Elem bareiss_determinant(const Field& F, Matrix M) {
  const std::size_t n = M.size();
  if (n == 0) return F.one();
  bool negate = false;
  Elem prev = F.one();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (F.is_zero(M[k][k])) {
      std::size_t piv = k + 1;
      while (piv < n && F.is_zero(M[piv][k])) ++piv;
      if (piv == n) return F.zero();
      std::swap(M[piv], M[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Elem num = F.sub(F.mul(M[i][j], M[k][k]), F.mul(M[i][k], M[k][j]));
        M[i][j] = F.div(num, prev);
      }
    }
    prev = M[k][k];
  }
  Elem d = M[n - 1][n - 1];
  return negate ? F.neg(d) : d;
}

std::optional<Matrix> inverse(const Field& F, const Matrix& M) {
  const std::size_t n = M.size();
  Matrix A = M;
  Matrix I = identity_matrix(F, n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && F.is_zero(A[piv][k])) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(A[piv], A[k]);
    std::swap(I[piv], I[k]);
    const Elem inv = F.inv(A[k][k]);
    for (std::size_t j = 0; j < n; ++j) {
      A[k][j] = F.mul(A[k][j], inv);
      I[k][j] = F.mul(I[k][j], inv);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || F.is_zero(A[i][k])) continue;
      const Elem factor = A[i][k];
      for (std::size_t j = 0; j < n; ++j) {
        A[i][j] = F.sub(A[i][j], F.mul(factor, A[k][j]));
        I[i][j] = F.sub(I[i][j], F.mul(factor, I[k][j]));
      }
    }
  }
  return I;
}

bool mat_eq(const Field& F, const Matrix& A, const Matrix& B) {
  if (A.size() != B.size()) return false;
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i].size() != B[i].size()) return false;
    for (std::size_t j = 0; j < A[i].size(); ++j)
      if (!F.eq(A[i][j], B[i][j])) return false;
  }
  return true;
}

Poly interpolate(const Field& F, const std::vector<Elem>& xs, const std::vector<Elem>& ys) {
  const std::size_t n = xs.size();
  std::vector<Elem> c = ys;
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i) {
      c[i] = F.div(F.sub(c[i], c[i - 1]), F.sub(xs[i], xs[i - level]));
      if (i == level) break;
    }
  PolyRing R(F);
  Poly p;
  for (std::size_t k = n; k-- > 0;) {
    p = R.mul(p, Poly{F.neg(xs[k]), F.one()});
    p = R.add(p, R.constant(c[k]));
  }
  return p;
}

Elem resultant(const Field& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) throw Error("resultant of the zero polynomial");
  const int m = PolyRing::degree(a), n = PolyRing::degree(b);
  if (m == 0) return F.pow(a[0], n);
  if (n == 0) return F.pow(b[0], m);
  const int size = m + n;
  Matrix S(size, std::vector<Elem>(size, F.zero()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) S[i][i + j] = a[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) S[n + i][i + j] = b[n - j];
  return bareiss_determinant(F, std::move(S));
}

Elem discriminant(const Field& F, const Poly& f) {
  const int n = PolyRing::degree(f);
  if (n < 1) throw Error("discriminant of a constant");
  PolyRing R(F);
  Elem r = resultant(F, f, R.derivative(f));
  if ((static_cast<long long>(n) * (n - 1) / 2) % 2 == 1) r = F.neg(r);
  return F.div(r, f.back());
}

// ----------------------------------------------------------- typed wrappers

NFElem operator+(const NFElem& a, const NFElem& b) {
  require_same_field(a.field, b.field, "add");
  return {a.field, a.field->add(a.value, b.value)};
}
NFElem operator-(const NFElem& a, const NFElem& b) {
  require_same_field(a.field, b.field, "sub");
  return {a.field, a.field->sub(a.value, b.value)};
}
NFElem operator-(const NFElem& a) { return {a.field, a.field->neg(a.value)}; }
NFElem operator*(const NFElem& a, const NFElem& b) {
  require_same_field(a.field, b.field, "mul");
  return {a.field, a.field->mul(a.value, b.value)};
}
NFElem operator/(const NFElem& a, const NFElem& b) {
  require_same_field(a.field, b.field, "div");
  return {a.field, a.field->div(a.value, b.value)};
}
bool operator==(const NFElem& a, const NFElem& b) {
  return same_field(a.field, b.field) && a.field->eq(a.value, b.value);
}
NFElem pow(const NFElem& a, long long e) { return {a.field, a.field->pow(a.value, e)}; }

UPoly UPoly::over_q(const std::vector<long long>& coeffs) {
  auto Q = Field::rationals();
  return UPoly(Q, PolyRing(*Q).from_ints(coeffs));
}

UPoly UPoly::over_q(const std::vector<Rational>& coeffs) {
  auto Q = Field::rationals();
  return UPoly(Q, PolyRing(*Q).from_rationals(coeffs));
}

json UPoly::to_json() const { return json{{"coeffs", PolyRing(*field).to_json(coeffs)}}; }

UPoly UPoly::from_json(const json& j, FieldPtr field, const std::string& pointer) {
  if (!j.is_object() || !j.contains("coeffs")) throw ParseError("expected {\"coeffs\": [...]}", pointer);
  Poly p = PolyRing(*field).from_json(j["coeffs"], pointer + "/coeffs");
  return UPoly(std::move(field), std::move(p));
}

bool operator==(const UPoly& a, const UPoly& b) {
  return same_field(a.field, b.field) && PolyRing(*a.field).eq(a.coeffs, b.coeffs);
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  require_same_field(a.field, b.field, "mul");
  return UPoly(a.field, PolyRing(*a.field).mul(a.coeffs, b.coeffs));
}

UPoly upoly_gcd(const UPoly& a, const UPoly& b) {
  require_same_field(a.field, b.field, "upoly_gcd");
  return UPoly(a.field, PolyRing(*a.field).gcd(a.coeffs, b.coeffs));
}

NFElem upoly_resultant(const UPoly& a, const UPoly& b) {
  require_same_field(a.field, b.field, "resultant");
  return {a.field, resultant(*a.field, a.coeffs, b.coeffs)};
}

NFElem upoly_discriminant(const UPoly& f) { return {f.field, discriminant(*f.field, f.coeffs)}; }

}  // namespace twistforge
