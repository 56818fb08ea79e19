#include "twistforge/twistgen.hpp"

#include <algorithm>
#include <numeric>

#include "twistforge/descent.hpp"

namespace twistforge {

namespace {

// e viewed in the subfield k of L's tower.
std::optional<Elem> descend(const FieldPtr& L, const FieldPtr& k, Elem e) {
  const Field* cur = L.get();
  while (!cur->same_as(*k)) {
    if (!cur->is_extension() || !cur->in_base(e)) return std::nullopt;
    e = cur->to_base(e);
    cur = cur->base().get();
  }
  return e;
}

int mod(long long x, int m) { return static_cast<int>(((x % m) + m) % m); }

long long weight_of(const Exponent& e, const std::vector<int>& a) {
  long long s = 0;
  for (std::size_t i = 0; i < e.size(); ++i) s += static_cast<long long>(a[i]) * e[i];
  return s;
}

HomForm divide_by_lex_first(const HomForm& F) {
  const Field& K = *F.field();
  const Elem c = F.body().terms().rbegin()->second;
  return F.scaled(K.inv(c));
}

HomForm descend_form(const HomForm& F, const FieldPtr& k) {
  MPoly out(k, F.n() + 1);
  for (const auto& [e, c] : F.body().terms()) {
    auto x = descend(F.field(), k, c);
    if (!x)
      throw Error("coefficient does not lie in the base field",
                  json{{"monomial", e}, {"coefficient", F.field()->elem_to_json(c)}, {"base", k->describe()}});
    out.add_term(e, *x);
  }
  return HomForm(F.n(), F.d(), std::move(out));
}

Certificate smoothness_transfer(const SmoothnessCertificate& a, const SmoothnessCertificate& b, const Field& k) {
  Certificate c;
  c.kind = "smoothness-transfer";
  c.claim = "F and F' have the same smoothness verdict";
  if (!a.conclusive || !b.conclusive)
    c.status = Status::inconclusive;
  else
    c.status = pass_if(a.smooth == b.smooth);
  c.witness = json{{"base", a.to_json(k)}, {"twisted", b.to_json(k)}};
  return c;
}

}  // namespace

// DiagonalAutomorphism

DiagonalAutomorphism DiagonalAutomorphism::make(int m, std::vector<int> a, FieldPtr field) {
  if (m < 1) throw DomainError("order must be positive");
  if (a.size() < 2) throw DomainError("need at least two exponents");
  if (a[0] % m != 0) throw DomainError("the first exponent must be 0", json{{"a", a}});
  int g = m;
  for (auto& x : a) {
    x = mod(x, m);
    g = std::gcd(g, x);
  }
  if (g != 1) throw DomainError("psi has order " + std::to_string(m / g) + " in PGL, not " + std::to_string(m), json{{"a", a}, {"m", m}});
  DiagonalAutomorphism psi;
  psi.m = m;
  psi.a = std::move(a);
  psi.field = field ? std::move(field) : cyclotomic(static_cast<unsigned>(m));
  psi.zeta = twistforge::zeta(psi.field, static_cast<unsigned>(m)).value;
  return psi;
}

ProjMatrix DiagonalAutomorphism::power(int k) const {
  std::vector<Elem> d;
  for (int x : a) d.push_back(field->pow(zeta, mod(static_cast<long long>(x) * k, m)));
  return ProjMatrix::diagonal(field, d);
}

ProjMatrix DiagonalAutomorphism::matrix() const { return power(1); }

json DiagonalAutomorphism::to_json() const {
  json j{{"m", m}, {"a", a}};
  if (!field->same_as(*cyclotomic(static_cast<unsigned>(m)))) j["field"] = field->to_json();
  return j;
}

DiagonalAutomorphism DiagonalAutomorphism::from_json(const json& j, const std::string& pointer) {
  if (!j.is_object()) throw ParseError("automorphism must be an object", pointer);
  if (!j.contains("m") || !j["m"].is_number_integer()) throw ParseError("'m' must be an integer", pointer + "/m");
  if (!j.contains("a") || !j["a"].is_array()) throw ParseError("'a' must be an array", pointer + "/a");
  std::vector<int> a;
  for (std::size_t i = 0; i < j["a"].size(); ++i) {
    if (!j["a"][i].is_number_integer()) throw ParseError("exponents are integers", pointer + "/a/" + std::to_string(i));
    a.push_back(j["a"][i].get<int>());
  }
  FieldPtr F = j.contains("field") ? Field::from_json(j["field"], pointer + "/field") : nullptr;
  try {
    return make(j["m"].get<int>(), std::move(a), F);
  } catch (const DomainError& e) {
    throw ParseError(e.what(), pointer);
  }
}

int form_weight(const HomForm& F, const DiagonalAutomorphism& psi) {
  if (psi.n() != F.n()) throw DomainError("automorphism size does not match the form");
  std::optional<int> w;
  Exponent first;
  for (const auto& [e, c] : F.body().terms()) {
    const int we = mod(weight_of(e, psi.a), psi.m);
    if (!w) {
      w = we;
      first = e;
    } else if (*w != we) {
      throw Error("psi is not an automorphism of F",
                  json{{"monomials", json::array({first, e})}, {"weights", json::array({*w, we})}});
    }
  }
  FieldPtr K = common_field(F.field(), psi.field);
  HomForm Fk = F.embed_into(K);
  const Elem z = K->embed_from(*psi.field, psi.zeta);
  if (!(substitute(Fk, psi.matrix().embed_into(K)).body() == Fk.body().scaled(K->pow(z, *w))))
    throw Error("internal: weight check disagrees with substitution");
  return *w;
}

// Twists

bool TwistModel::all_passed() const {
  for (const auto& c : certificates)
    if (c.status == Status::fail) return false;
  return true;
}

json TwistModel::to_json() const {
  const Field& k = *base.field();
  json certs = json::array();
  for (const auto& c : certificates) certs.push_back(c.to_json());
  json j{{"kind", kind},
         {"base_form", base.to_json()},
         {"twisted_form", twisted.to_json()},
         {"normalized_form", normalized.to_json()},
         {"D", D.to_json()},
         {"weight", weight},
         {"root_in_k", root_in_k},
         {"certificates", certs}};
  if (psi) j["psi"] = psi->to_json();
  if (b) j["b"] = k.elem_to_json(*b);
  if (root_poly) j["root_poly"] = root_poly->to_json();
  return j;
}

TwistModel diagonal_twist(const HomForm& F, const DiagonalAutomorphism& psi, const NFElem& b, bool check_smooth) {
  FieldPtr k;
  try {
    k = common_field(F.field(), psi.field);
    k = common_field(k, b.field);
  } catch (const DomainError&) {
    throw DomainError("zeta_m must lie in the field of the form", json{{"form", F.field()->describe()}, {"psi", psi.field->describe()}});
  }
  if (k->characteristic() != 0) throw DomainError("diagonal twists are built over number fields");
  const Elem bk = k->embed_from(*b.field, b.value);
  if (k->is_zero(bk)) throw DomainError("b must be nonzero");
  const HomForm Fk = F.embed_into(k);
  const int m = psi.m;
  const int w = form_weight(Fk, psi);

  TwistModel T;
  T.kind = "diagonal";
  T.base = Fk;
  T.psi = psi;
  T.b = bk;
  T.weight = w;

  // r^m = b: smallest-degree factor of t^m - b over k.
  Poly tm(m + 1, k->zero());
  tm[0] = k->neg(bk);
  tm[m] = k->one();
  auto factors = factor_over_field(UPoly(k, tm));
  const UPoly* g = &factors.front();
  for (const auto& f : factors)
    if (f.degree() < g->degree()) g = &f;
  T.root_poly = *g;
  T.root_in_k = g->degree() == 1;

  FieldPtr R;
  Elem r;
  if (T.root_in_k) {
    R = k;
    r = k->neg(g->coeffs[0]);
  } else {
    if (k->height() >= kMaxTowerHeight) throw DomainError("cannot adjoin an m-th root above a height-2 tower");
    R = Field::extension(k, g->coeffs, "", "r");
    r = R->gen();
  }
  std::vector<Elem> diag;
  for (int x : psi.a) diag.push_back(R->pow(r, x));
  T.D = ProjMatrix::diagonal(R, diag);

  HomForm FR = Fk.embed_into(R);
  HomForm sub = substitute(FR, T.D).scaled(R->inv(R->pow(r, w)));
  Certificate in_k;
  in_k.kind = "coefficients-in-k";
  in_k.claim = "every coefficient of r^-w F(D X) lies in k";
  try {
    T.twisted = descend_form(sub, k);
    in_k.status = Status::pass;
  } catch (const Error& e) {
    in_k.status = Status::fail;
    in_k.witness = e.witness();
    T.certificates.push_back(in_k);
    throw Error("twisted coefficient escapes k", e.witness());
  }
  in_k.witness = json{{"terms", T.twisted.body().size()}};
  T.certificates.push_back(in_k);

  Certificate formula;
  formula.kind = "weight-formula";
  formula.claim = "coefficient of X^e is c_e b^((sum a_i e_i - w)/m)";
  bool ok = true;
  json mism = json::array();
  for (const auto& [e, c] : Fk.body().terms()) {
    const long long s = weight_of(e, psi.a) - w;
    if (s % m != 0 || s < 0) {
      ok = false;
      mism.push_back(json{{"monomial", e}, {"reason", "weight not divisible"}});
      continue;
    }
    Elem expect = k->mul(c, k->pow(bk, s / m));
    if (!k->eq(expect, T.twisted.body().coeff(e))) {
      ok = false;
      mism.push_back(json{{"monomial", e}});
    }
  }
  formula.status = pass_if(ok && T.twisted.body().size() == Fk.body().size());
  formula.witness = json{{"mismatches", mism}};
  T.certificates.push_back(formula);

  if (T.root_in_k) {
    Certificate triv;
    triv.kind = "kummer-trivial";
    triv.claim = "b is an m-th power in k; D has entries in k";
    triv.status = Status::pass;
    triv.witness = json{{"root", k->elem_to_json(r)}};
    T.certificates.push_back(triv);
  }

  T.normalized = divide_by_lex_first(T.twisted);
  if (check_smooth) {
    T.smooth_base = certify_smooth(Fk);
    T.smooth_twisted = certify_smooth(T.twisted);
    T.certificates.push_back(smoothness_transfer(*T.smooth_base, *T.smooth_twisted, *k));
  }
  return T;
}

std::optional<ProjMatrix> kummer_isomorphism(const TwistModel& A, const TwistModel& B) {
  if (A.kind != "diagonal" || B.kind != "diagonal" || !A.psi || !B.psi)
    throw DomainError("Kummer equivalence is decided for diagonal twists only");
  if (!(A.base == B.base) || A.psi->a != B.psi->a || A.psi->m != B.psi->m)
    throw DomainError("twists of different forms or automorphisms");
  const FieldPtr& k = A.base.field();
  const int m = A.psi->m;
  const Elem q = k->div(*B.b, *A.b);
  Poly tm(m + 1, k->zero());
  tm[0] = k->neg(q);
  tm[m] = k->one();
  auto roots = roots_in_field(UPoly(k, tm), k);
  if (roots.empty()) return std::nullopt;
  const Elem u = roots.front().value;
  std::vector<Elem> diag;
  for (int x : A.psi->a) diag.push_back(k->pow(u, x));
  ProjMatrix E = ProjMatrix::diagonal(k, diag);
  HomForm S = substitute(A.twisted, E);
  if (!(divide_by_lex_first(S) == B.normalized))
    throw Error("internal: Kummer isomorphism failed to verify", json{{"u", k->elem_to_json(u)}});
  return E;
}

// P = M D

json MDReduction::to_json() const {
  return json{{"M", M.to_json()}, {"D", D.to_json()}, {"psi_powers", psi_powers}, {"certificate", certificate.to_json()}};
}

MDReduction reduce_P_to_MD(const ProjMatrix& P, const DiagonalAutomorphism& psi, const CyclicGaloisDatum& G) {
  const FieldPtr& L = G.top;
  const FieldPtr k = G.base();
  if (!same_field(common_field(L, P.field()), L)) throw DomainError("P must have entries in the top field");
  if (!same_field(common_field(k, psi.field), k)) throw DomainError("zeta_m must lie in the base field");
  if (static_cast<int>(P.size()) != psi.n() + 1) throw DomainError("P and psi differ in size");
  ProjMatrix PL = P.embed_into(L);
  PL.require_invertible();
  ProjMatrix Pinv = PL.inverse();

  std::vector<ProjMatrix> powers;
  for (int s = 0; s < psi.m; ++s) powers.push_back(psi.power(s).embed_into(L));

  MDReduction out;
  for (int j = 1; j < G.order; ++j) {
    ProjMatrix Q = Pinv * galois_apply(PL, G, j);
    int found = -1;
    if (Q.is_diagonal()) {
      ProjMatrix Qn = Q.normalized();
      for (int s = 0; s < psi.m && found < 0; ++s)
        if (Qn.exact_equal(powers[s])) found = s;
    }
    if (found < 0)
      throw Error("P^-1 sigma(P) is not in <psi>", json{{"sigma_power", j}, {"matrix", Q.to_json()["rows"]}});
    out.psi_powers.push_back(found);
  }

  const std::size_t N = PL.size();
  Matrix Mk(N, std::vector<Elem>(N));
  std::vector<Elem> diag(N);
  for (std::size_t j = 0; j < N; ++j) {
    std::size_t pivot = 0;
    while (pivot < N && L->is_zero(PL(pivot, j))) ++pivot;
    if (pivot == N) throw Error("internal: zero column in an invertible matrix");
    diag[j] = PL(pivot, j);
    for (std::size_t i = 0; i < N; ++i) {
      auto x = descend(L, k, L->div(PL(i, j), diag[j]));
      if (!x) throw Error("internal: column ratio is not Galois-fixed", json{{"row", i}, {"column", j}});
      Mk[i][j] = *x;
    }
  }
  out.M = ProjMatrix(k, std::move(Mk));
  out.D = ProjMatrix::diagonal(L, diag);
  out.M.require_invertible();
  const ProjMatrix ML = out.M.embed_into(L);
  ProjMatrix MD = ML * out.D;
  out.certificate.kind = "reduce-MD";
  out.certificate.claim = "P = M D with M over k and D diagonal";
  out.certificate.status = pass_if(MD.pgl_equal(PL));
  bool fixed = true;
  for (const auto& row : ML.entries())
    for (const auto& x : row) fixed = fixed && L->eq(G.apply(x), x);
  if (!fixed) out.certificate.status = Status::fail;
  out.certificate.witness = json{{"psi_powers", out.psi_powers}, {"M", out.M.to_json()["rows"]}, {"M_fixed", fixed}};
  return out;
}

TwistModel twist_model_from_matrix(const HomForm& F, const ProjMatrix& M, const std::optional<CyclicGaloisDatum>& G,
                                   const std::vector<ProjMatrix>& automorphisms) {
  const FieldPtr& k = F.field();
  FieldPtr L = common_field(k, M.field());
  TwistModel T;
  T.kind = "matrix";
  T.base = F;
  T.D = M.embed_into(L);
  HomForm sub = divide_by_lex_first(substitute(F.embed_into(L), T.D));
  try {
    T.twisted = descend_form(sub, k);
  } catch (const Error& e) {
    throw Error("the matrix does not define a model over k", e.witness());
  }
  T.normalized = T.twisted;
  Certificate in_k;
  in_k.kind = "coefficients-in-k";
  in_k.claim = "F(M X) has coefficients in k after one rescale";
  in_k.witness = json{{"terms", T.twisted.body().size()}};
  T.certificates.push_back(in_k);

  if (G) {
    if (!same_field(G->top, L)) throw DomainError("Galois datum does not match the matrix field");
    ProjMatrix xi = galois_apply(T.D, *G) * T.D.inverse();
    Certificate aut;
    aut.kind = "automorphism-match";
    aut.claim = "sigma(M) M^-1 is a listed automorphism";
    aut.witness = json{{"xi", xi.to_json()["rows"]}};
    if (automorphisms.empty()) {
      // F(xi Y) proportional to F(Y) is what the k-model condition means.
      HomForm FL = F.embed_into(L);
      aut.status = pass_if(divide_by_lex_first(substitute(FL, xi)) == divide_by_lex_first(FL));
      aut.note = "no automorphism list supplied; checked that xi stabilizes F";
    } else {
      int idx = -1;
      for (std::size_t i = 0; i < automorphisms.size() && idx < 0; ++i)
        if (xi.pgl_equal(automorphisms[i].embed_into(L))) idx = static_cast<int>(i);
      aut.status = pass_if(idx >= 0);
      aut.witness["index"] = idx;
    }
    T.certificates.push_back(aut);
  }
  return T;
}

json splitting_conditions(int d, int n, const std::string& field_kind, std::optional<bool> has_rational_point,
                          const json& beta_certificates) {
  static const std::vector<std::string> kinds{"algebraically-closed", "finite", "curve-function-field",
                                              "Q-with-all-roots-of-unity", "real", "number-field", "other"};
  if (std::find(kinds.begin(), kinds.end(), field_kind) == kinds.end())
    throw ParseError("unknown field kind '" + field_kind + "'");
  if (d < 1 || n < 1) throw DomainError("d and n must be positive");
  const int g = std::gcd(d, n + 1);
  json rp;
  if (has_rational_point)
    rp = json{{"met", *has_rational_point}, {"source", "caller"}};
  else
    rp = json{{"met", nullptr}, {"source", "not supplied"}};
  bool brauer = false;
  std::string reason;
  if (field_kind == "algebraically-closed" || field_kind == "finite" || field_kind == "curve-function-field" ||
      field_kind == "Q-with-all-roots-of-unity") {
    brauer = true;
    reason = "Br(k) is trivial for this field kind";
  } else if (field_kind == "real") {
    brauer = (n + 1) % 2 == 1;
    reason = brauer ? "Br(R)[n+1] is trivial for n+1 odd" : "Br(R) has order 2 and n+1 is even";
  } else {
    reason = "not deduced for this field kind";
  }
  const bool met = (has_rational_point && *has_rational_point) || g == 1 || brauer;
  std::vector<std::string> which;
  if (has_rational_point && *has_rational_point) which.push_back("rational-point");
  if (g == 1) which.push_back("gcd");
  if (brauer) which.push_back("brauer");
  return json{{"d", d},
              {"n", n},
              {"field_kind", field_kind},
              {"rational_point", rp},
              {"gcd", json{{"value", g}, {"met", g == 1}}},
              {"brauer", json{{"met", brauer}, {"reason", reason}}},
              {"conditions_met", which},
              {"beta_certificates", beta_certificates},
              {"verdict", met ? "always a smooth hypersurface over k" : "inconclusive"}};
}

}  // namespace twistforge
