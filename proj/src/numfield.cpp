#include "twistforge/numfield.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "twistforge/nmod_poly.hpp"

namespace twistforge {

namespace {

// Shift sequence 0, 1, -1, 2, -2, ...
int shift_at(int k) { return k == 0 ? 0 : (k % 2 ? (k + 1) / 2 : -(k / 2)); }

constexpr int kMaxShifts = 40;

bool coefficients_in_base(const Field& K, const Poly& f) {
  for (const auto& c : f)
    if (!K.in_base(c)) return false;
  return true;
}

Poly to_base_coeffs(const Field& K, const Poly& f) {
  Poly out;
  out.reserve(f.size());
  for (const auto& c : f) out.push_back(K.to_base(c));
  return out;
}

bool all_rational(const Field& K, const Poly& f) {
  for (const auto& c : f)
    if (!K.as_rational(c)) return false;
  return true;
}

bool squarefree_over(const Field& F, const Poly& f) {
  if (F.is_rationals()) {
    auto parts = squarefree_over_Q(primitive_part(F, f));
    return parts.size() == 1 && parts[0].second == 1;
  }
  return PolyRing(F).is_squarefree(f);
}

// N_{K/base}(f(x - s*theta)) as a polynomial over base, by interpolation.
Poly trager_norm(const Field& K, const Poly& f, int s) {
  const Field& B = *K.base();
  PolyRing RK(K);
  Poly g = RK.shift(f, K.mul(K.from_int(-s), K.gen()));
  const int D = PolyRing::degree(f) * K.degree();
  std::vector<Elem> xs, ys;
  for (int i = 0; i <= D; ++i) {
    Elem x = B.from_int(i);
    xs.push_back(x);
    ys.push_back(K.norm_to_base(RK.eval(g, K.embed(x))));
  }
  return interpolate(B, xs, ys);
}

struct TragerResult {
  int shift = 0;
  Poly norm;
  std::vector<Poly> norm_factors;
  std::vector<Poly> factors;
  IrreducibilityCertificate q_cert;
};

std::vector<Poly> factor_poly(const Field& F, const Poly& f);

TragerResult trager(const Field& K, const Poly& f) {
  const Field& B = *K.base();
  TragerResult out;
  int k = 0;
  for (; k < kMaxShifts; ++k) {
    out.shift = shift_at(k);
    out.norm = trager_norm(K, f, out.shift);
    if (squarefree_over(B, out.norm)) break;
  }
  if (k == kMaxShifts) throw Error("no squarefree Trager norm found", json{{"shifts", kMaxShifts}});
  if (B.is_rationals()) {
    out.q_cert = certify_irreducible_over_Q(UPoly(K.base(), out.norm));
    if (out.q_cert.irreducible) {
      out.norm_factors = {PolyRing(B).monic(out.norm)};
      out.factors = {PolyRing(K).monic(f)};
      return out;
    }
  }
  out.norm_factors = factor_poly(B, out.norm);
  PolyRing RK(K);
  if (out.norm_factors.size() == 1) {
    out.factors = {RK.monic(f)};
    return out;
  }
  const Elem st = K.mul(K.from_int(out.shift), K.gen());
  Poly g = RK.shift(f, K.neg(st));
  for (const auto& nj : out.norm_factors) {
    Poly h = RK.gcd(g, RK.embed_from(B, nj));
    out.factors.push_back(RK.monic(RK.shift(h, st)));
  }
  return out;
}

std::vector<Poly> factor_poly(const Field& F, const Poly& f) {
  if (PolyRing::degree(f) <= 1) return {PolyRing(F).monic(f)};
  if (F.is_rationals()) {
    std::vector<Poly> out;
    for (const auto& part : factor_over_Q(UPoly(Field::rationals(), f)).factors)
      out.push_back(PolyRing(F).monic(part.factor.coeffs));
    return out;
  }
  if (F.is_prime()) {
    const Zp Z(F.prime());
    std::vector<Integer> ints;
    for (const auto& c : f) ints.push_back(c.q().get_num());
    std::vector<Poly> out;
    for (const auto& part : factor_mod_p(Z, nmod::from_integers(Z, ints)).factors) {
      Poly p;
      for (auto c : part.factor) p.push_back(F.from_integer(Integer(static_cast<unsigned long>(c))));
      out.push_back(p);
    }
    return out;
  }
  return trager(F, f).factors;
}

std::vector<Elem> linear_roots(const Field& F, const std::vector<Poly>& factors) {
  std::vector<Elem> roots;
  for (const auto& h : factors)
    if (PolyRing::degree(h) == 1) roots.push_back(F.neg(F.div(h[0], h[1])));
  return roots;
}

std::vector<Elem> find_roots(const Field& K, const Poly& f) {
  if (PolyRing::degree(f) < 1) return {};
  if (PolyRing::degree(f) == 1) return {K.neg(K.div(f[0], f[1]))};
  if (K.is_rationals() || K.is_prime()) return linear_roots(K, factor_poly(K, f));
  // Coefficients in the base: roots there may already be all of them.
  if (coefficients_in_base(K, f)) {
    std::vector<Elem> sub = find_roots(*K.base(), to_base_coeffs(K, f));
    if (static_cast<int>(sub.size()) == PolyRing::degree(f)) {
      std::vector<Elem> out;
      for (auto& r : sub) out.push_back(K.embed(r));
      return out;
    }
    // K = B[t]/(m) with m and f rational: look in Q[t]/(m) first.
    if (K.height() == 2 && all_rational(K, f) && all_rational(*K.base(), K.modulus())) {
      std::vector<Rational> mq;
      for (const auto& c : K.modulus()) mq.push_back(*K.base()->as_rational(c));
      auto E = Field::extension(Field::rationals(), PolyRing(*Field::rationals()).from_rationals(mq));
      std::vector<Rational> fq;
      for (const auto& c : f) fq.push_back(*K.as_rational(c));
      PolyRing RE(*E);
      std::vector<Elem> er = find_roots(*E, RE.from_rationals(fq));
      if (static_cast<int>(er.size()) == PolyRing::degree(f)) {
        std::vector<Elem> out;
        for (const auto& r : er) {
          Coords c;
          for (const auto& q : r.coords()) c.push_back(K.base()->from_rational(q.q()));
          out.push_back(K.from_coords(std::move(c)));
        }
        return out;
      }
    }
  }
  return linear_roots(K, trager(K, f).factors);
}

std::uint64_t first_prime_at_least(std::uint64_t p) {
  while (!is_prime(p)) ++p;
  return p;
}

std::vector<std::uint64_t> simple_roots_mod_p(const Zp& F, const NmodPoly& f) {
  std::vector<std::uint64_t> out;
  NmodPoly df = nmod::derivative(F, f);
  for (auto r : roots_mod_p(F, f))
    if (nmod::eval(F, df, r) != 0) out.push_back(r);
  return out;
}

// Tower levels bottom (just above Q) to top.
std::vector<const Field*> tower_levels(const Field& K) {
  std::vector<const Field*> levels;
  for (const Field* F = &K; F->is_extension(); F = F->base().get()) levels.push_back(F);
  std::reverse(levels.begin(), levels.end());
  return levels;
}

std::optional<std::uint64_t> reduce_with(const Field& F, const Elem& e, const Zp& Z,
                                         const std::vector<std::uint64_t>& images, std::size_t level) {
  if (F.is_rationals()) {
    if (mpz_divisible_ui_p(e.q().get_den_mpz_t(), Z.p())) return std::nullopt;
    return reduce_mod_p(e.q(), Z.p());
  }
  std::uint64_t acc = 0;
  const std::uint64_t r = images[level - 1];
  const auto& c = e.coords();
  for (std::size_t i = c.size(); i-- > 0;) {
    auto v = reduce_with(*F.base(), c[i], Z, images, level - 1);
    if (!v) return std::nullopt;
    acc = Z.add(Z.mul(acc, r), *v);
  }
  return acc;
}

bool search_place(const std::vector<const Field*>& levels, std::size_t level, const Zp& Z,
                  std::vector<std::uint64_t>& images) {
  if (level == levels.size()) return true;
  const Field& F = *levels[level];
  NmodPoly m;
  for (const auto& c : F.modulus()) {
    auto v = reduce_with(*F.base(), c, Z, images, level);
    if (!v) return false;
    m.push_back(*v);
  }
  nmod::trim(m);
  for (auto r : simple_roots_mod_p(Z, m)) {
    images.push_back(r);
    if (search_place(levels, level + 1, Z, images)) return true;
    images.pop_back();
  }
  return false;
}

}  // namespace

json FieldIrreducibility::to_json() const {
  json j{{"irreducible", irreducible}, {"method", method}};
  if (method == "trager") {
    j["shift"] = shift;
    j["norm_degree"] = norm_degree;
    j["norm"] = norm.to_json();
    j["norm_certificate"] = norm_certificate.to_json();
  } else if (method == "Q") {
    j["certificate"] = norm_certificate.to_json();
  }
  if (!irreducible) {
    json fs = json::array();
    for (const auto& f : factors) fs.push_back(f.to_json());
    j["factors"] = fs;
  }
  return j;
}

FieldIrreducibility certify_irreducible(const UPoly& f) {
  FieldIrreducibility out;
  const Field& F = *f.field;
  if (f.degree() < 1) throw Error("irreducibility of a constant polynomial");
  if (f.degree() == 1) {
    out.irreducible = true;
    out.method = "linear";
    return out;
  }
  if (F.is_rationals()) {
    out.method = "Q";
    out.norm_certificate = certify_irreducible_over_Q(f);
    out.irreducible = out.norm_certificate.irreducible;
    if (!out.irreducible) out.factors = {out.norm_certificate.factor};
    return out;
  }
  if (F.is_prime()) {
    const Zp Z(F.prime());
    std::vector<Integer> ints;
    for (const auto& c : f.coeffs) ints.push_back(c.q().get_num());
    auto fac = factor_mod_p(Z, nmod::from_integers(Z, ints));
    out.method = "mod-p";
    out.irreducible = fac.factors.size() == 1 && fac.factors[0].multiplicity == 1;
    if (!out.irreducible) {
      Poly p;
      for (auto c : fac.factors[0].factor) p.push_back(F.from_integer(Integer(static_cast<unsigned long>(c))));
      out.factors = {UPoly(f.field, p)};
    }
    return out;
  }
  PolyRing R(F);
  Poly g = R.gcd(f.coeffs, R.derivative(f.coeffs));
  if (PolyRing::degree(g) > 0) {
    out.method = "squarefree";
    out.factors = {UPoly(f.field, g)};
    return out;
  }
  TragerResult tr = trager(F, f.coeffs);
  out.method = "trager";
  out.shift = tr.shift;
  out.norm = UPoly(F.base(), tr.norm);
  out.norm_degree = PolyRing::degree(tr.norm);
  out.norm_certificate = tr.q_cert;
  out.irreducible = tr.factors.size() == 1;
  if (!out.irreducible)
    for (auto& h : tr.factors) out.factors.push_back(UPoly(f.field, h));
  return out;
}

FieldPtr nf_create(const UPoly& f, FieldPtr base, std::string label, std::string generator,
                   FieldIrreducibility* certificate) {
  if (!base) throw Error("nf_create needs a base field");
  if (base->height() + 1 > kMaxTowerHeight)
    throw DomainError("tower height above the supported bound", json{{"bound", kMaxTowerHeight}});
  Poly coeffs = PolyRing(*base).embed_from(*f.field, f.coeffs);
  UPoly g(base, coeffs);
  if (g.degree() < 1) throw Error("defining polynomial must be nonconstant");
  if (!base->is_one(g.coeffs.back())) throw Error("defining polynomial must be monic", json{{"poly", g.to_json()}});
  FieldIrreducibility cert = certify_irreducible(g);
  if (certificate) *certificate = cert;
  if (!cert.irreducible) throw Error("defining polynomial is reducible", cert.to_json());
  return Field::extension(base, coeffs, std::move(label), std::move(generator));
}

FieldPtr cyclotomic(unsigned m) { return cyclotomic_field(m); }

NFElem zeta(const FieldPtr& K, unsigned m) {
  if (m == 0) throw Error("root of unity of order 0");
  if (m == 1) return {K, K->one()};
  if (m == 2) return {K, K->from_int(-1)};
  for (const Field* F = K.get(); F && F->is_extension(); F = F->base().get()) {
    const std::string& lab = F->label();
    if (lab.rfind("cyclotomic(", 0) != 0 || !F->base()->is_rationals()) continue;
    const unsigned mm = static_cast<unsigned>(std::stoul(lab.substr(11)));
    Elem z;
    if (mm % m == 0) {
      z = F->pow(F->gen(), mm / m);
    } else if (mm % 2 == 1 && (2 * mm) % m == 0) {
      // zeta_{2mm} = -zeta_mm^((mm+1)/2)
      Elem z2 = F->neg(F->pow(F->gen(), (mm + 1) / 2));
      z = F->pow(z2, 2 * mm / m);
    } else {
      continue;
    }
    return {K, K->embed_from(*F, z)};
  }
  throw DomainError("field does not contain a designated root of unity of order " + std::to_string(m),
                    json{{"field", K->describe()}});
}

NFElem nf_norm(const NFElem& x) {
  if (!x.field->is_extension()) throw DomainError("norm requested for an element of a prime field");
  return {x.field->base(), x.field->norm_to_base(x.value)};
}

std::vector<UPoly> factor_over_field(const UPoly& f) {
  if (f.is_zero()) throw Error("factorization of the zero polynomial");
  std::vector<UPoly> out;
  for (auto& p : factor_poly(*f.field, f.coeffs)) out.emplace_back(f.field, p);
  return out;
}

std::vector<NFElem> roots_in_field(const UPoly& f, const FieldPtr& K) {
  if (f.is_zero()) throw Error("roots of the zero polynomial");
  const Field& F = *K;
  PolyRing R(F);
  Poly g = R.embed_from(*f.field, f.coeffs);
  Poly d = R.gcd(g, R.derivative(g));
  if (PolyRing::degree(d) > 0)
    throw Error("polynomial is not squarefree", json{{"gcd_with_derivative", R.to_json(d)}});
  std::vector<NFElem> out;
  for (auto& r : find_roots(F, g)) {
    if (!F.is_zero(R.eval(g, r))) throw Error("internal: root candidate does not evaluate to zero");
    bool dup = false;
    for (const auto& e : out) dup = dup || F.eq(e.value, r);
    if (!dup) out.emplace_back(K, std::move(r));
  }
  return out;
}

// ----------------------------------------------------------- cyclic Galois

Elem CyclicGaloisDatum::apply(const Elem& x) const {
  const Field& L = *top;
  Elem r = L.zero();
  const auto& c = x.coords();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (L.base()->is_zero(c[i])) continue;
    r = L.add(r, L.mul(L.embed(c[i]), sigma_powers_[i]));
  }
  return r;
}

Elem CyclicGaloisDatum::apply_power(const Elem& x, int k) const {
  k %= order;
  if (k < 0) k += order;
  Elem r = x;
  for (int i = 0; i < k; ++i) r = apply(r);
  return r;
}

std::vector<Elem> CyclicGaloisDatum::orbit() const {
  std::vector<Elem> out{top->gen()};
  for (int i = 1; i < order; ++i) out.push_back(apply(out.back()));
  return out;
}

json CyclicGaloisDatum::to_json() const {
  return json{{"field", top->to_json()}, {"sigma_theta", top->elem_to_json(sigma_theta)}, {"order", order}};
}

CyclicGaloisDatum CyclicGaloisDatum::from_json(const json& j, const std::string& pointer) {
  if (!j.is_object() || !j.contains("field") || !j.contains("sigma_theta"))
    throw ParseError("expected {\"field\", \"sigma_theta\"}", pointer);
  FieldPtr L = Field::from_json(j["field"], pointer + "/field");
  if (!L->is_extension()) throw ParseError("Galois datum needs an extension field", pointer + "/field");
  Elem s = L->elem_from_json(j["sigma_theta"], pointer + "/sigma_theta");
  return make_cyclic_datum(L, s);
}

CyclicGaloisDatum make_cyclic_datum(FieldPtr K, Elem sigma_theta) {
  const Field& L = *K;
  if (!L.is_extension()) throw DomainError("cyclic datum over a prime field");
  PolyRing R(L);
  Poly f = R.embed_from(*L.base(), L.modulus());
  if (!L.is_zero(R.eval(f, sigma_theta)))
    throw Error("sigma(theta) is not a root of the defining polynomial",
                json{{"sigma_theta", L.elem_to_json(sigma_theta)}});
  CyclicGaloisDatum G;
  G.top = K;
  G.sigma_theta = sigma_theta;
  G.order = L.degree();
  G.sigma_powers_.push_back(L.one());
  for (int i = 1; i < L.degree(); ++i) G.sigma_powers_.push_back(L.mul(G.sigma_powers_.back(), sigma_theta));
  const Elem theta = L.gen();
  Elem cur = theta;
  int length = 0;
  do {
    cur = G.apply(cur);
    ++length;
  } while (!L.eq(cur, theta) && length <= L.degree());
  if (length != L.degree())
    throw Error("sigma does not generate a cyclic group of full order",
                json{{"orbit_length", length}, {"degree", L.degree()}});
  return G;
}

CyclicGaloisDatum certify_cyclic(const FieldPtr& K, const std::optional<Elem>& hint) {
  const Field& L = *K;
  if (!L.is_extension()) throw DomainError("cyclic certification needs an extension");
  const int n = L.degree();
  if (n == 1) return make_cyclic_datum(K, L.gen());
  if (hint) return make_cyclic_datum(K, *hint);
  if (n == 3 && L.base()->is_rationals()) {
    Elem disc = discriminant(*L.base(), L.modulus());
    Rational q = disc.q();
    const bool square = q > 0 && is_perfect_square(q.get_num()) && is_perfect_square(q.get_den());
    if (!square)
      throw Error("not Galois", json{{"root_count", 1}, {"discriminant", to_string(q)}, {"reason", "non-square discriminant"}});
  }
  UPoly f(L.base(), L.modulus());
  std::vector<NFElem> roots = roots_in_field(f, K);
  if (static_cast<int>(roots.size()) < n)
    throw Error("not Galois", json{{"root_count", roots.size()}, {"degree", n}});
  const Elem theta = L.gen();
  json cycle_types = json::array();
  for (const auto& r : roots) {
    if (L.eq(r.value, theta)) continue;
    CyclicGaloisDatum G;
    G.top = K;
    G.sigma_theta = r.value;
    G.order = n;
    G.sigma_powers_.push_back(L.one());
    for (int i = 1; i < n; ++i) G.sigma_powers_.push_back(L.mul(G.sigma_powers_.back(), r.value));
    // cycle type of the induced permutation of the roots
    std::vector<bool> seen(roots.size(), false);
    std::vector<int> cycles;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (seen[i]) continue;
      int len = 0;
      std::size_t cur = i;
      while (!seen[cur]) {
        seen[cur] = true;
        ++len;
        Elem img = G.apply(roots[cur].value);
        for (std::size_t k = 0; k < roots.size(); ++k)
          if (L.eq(roots[k].value, img)) {
            cur = k;
            break;
          }
      }
      cycles.push_back(len);
    }
    std::sort(cycles.begin(), cycles.end());
    if (cycles.size() == 1) return make_cyclic_datum(K, r.value);
    cycle_types.push_back(cycles);
  }
  throw Error("not cyclic", json{{"cycle_types", cycle_types}});
}

NFElem relative_norm(const NFElem& x, const CyclicGaloisDatum& G) {
  require_same_field(x.field, G.top, "relative_norm");
  const Field& L = *G.top;
  Elem prod = L.one();
  Elem cur = x.value;
  for (int i = 0; i < G.order; ++i) {
    prod = L.mul(prod, cur);
    cur = G.apply(cur);
  }
  if (!L.eq(G.apply(prod), prod)) throw Error("internal: norm not fixed by sigma");
  if (!L.in_base(prod)) throw Error("internal: norm outside the base field");
  return {G.base(), L.to_base(prod)};
}

// ------------------------------------------------------------------ places

std::optional<std::uint64_t> DegreeOnePlace::reduce(const Elem& e) const {
  const Zp Z(p);
  return reduce_with(*field, e, Z, images, images.size());
}

json DegreeOnePlace::to_json() const { return json{{"p", p}, {"images", images}}; }

std::optional<DegreeOnePlace> degree_one_place(const FieldPtr& K, std::uint64_t p) {
  if (K->characteristic() != 0) throw DomainError("degree-one places are defined for number fields");
  if (!is_prime(p)) return std::nullopt;
  const Zp Z(p);
  auto levels = tower_levels(*K);
  std::vector<std::uint64_t> images;
  if (!search_place(levels, 0, Z, images)) return std::nullopt;
  return DegreeOnePlace{K, p, images};
}

std::vector<DegreeOnePlace> degree_one_places(const FieldPtr& K, std::size_t count, std::uint64_t start,
                                              std::uint64_t congruence, std::uint64_t limit) {
  std::vector<DegreeOnePlace> out;
  for (std::uint64_t p = first_prime_at_least(std::max<std::uint64_t>(start, 2)); p < limit && out.size() < count;
       p = first_prime_at_least(p + 1)) {
    if (congruence > 1 && p % congruence != 1) continue;
    if (auto place = degree_one_place(K, p)) out.push_back(*place);
  }
  return out;
}

// ---------------------------------------------------------- roots of unity

json TorsionReport::to_json() const {
  return json{{"orders", orders}, {"candidates", candidates}, {"filter_primes", filter_primes}};
}

TorsionReport torsion_report(const FieldPtr& K) {
  TorsionReport rep;
  const std::uint64_t n = static_cast<std::uint64_t>(K->absolute_degree());
  // phi(j) <= n forces j <= 2 n^2 + 2 (phi(j) >= sqrt(j/2)).
  for (unsigned j = 1; j <= 2 * n * n + 2; ++j)
    if (n % euler_phi(j) == 0) rep.candidates.push_back(j);
  std::vector<unsigned> alive;
  if (K->is_rationals()) {
    rep.orders = {1, 2};
    return rep;
  }
  auto places = degree_one_places(K, 4, 11);
  for (const auto& pl : places) rep.filter_primes.push_back(pl.p);
  for (unsigned j : rep.candidates) {
    bool excluded = false;
    for (const auto& pl : places)
      if (j % pl.p != 0 && (pl.p - 1) % j != 0) excluded = true;
    if (!excluded) alive.push_back(j);
  }
  for (unsigned j : alive) {
    if (j <= 2) {
      rep.orders.push_back(j);
      continue;
    }
    UPoly phi(Field::rationals(), cyclotomic_polynomial(j));
    if (!roots_in_field(phi, K).empty()) rep.orders.push_back(j);
  }
  return rep;
}

std::vector<unsigned> torsion_roots_of_unity(const FieldPtr& K) { return torsion_report(K).orders; }

}  // namespace twistforge
