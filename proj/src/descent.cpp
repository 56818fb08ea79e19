#include "twistforge/descent.hpp"

#include <numeric>

namespace twistforge {

namespace {

void require_nonzero(const Field& K, const Elem& a, const char* what) {
  if (K.is_zero(a)) throw DomainError(std::string(what) + ": the scalar must be nonzero");
}

json matrix_witness(const ProjMatrix& M) { return M.to_json()["rows"]; }

}  // namespace

ProjMatrix companion_C(const FieldPtr& K, const Elem& a, int n) {
  require_nonzero(*K, a, "companion_C");
  if (n < 1) throw DomainError("companion matrices need n >= 1");
  Matrix m(n + 1, std::vector<Elem>(n + 1, K->zero()));
  m[0][n] = a;
  for (int i = 1; i <= n; ++i) m[i][i - 1] = K->one();
  return ProjMatrix(K, std::move(m));
}

ProjMatrix companion_D(const FieldPtr& K, const Elem& a, int n) {
  require_nonzero(*K, a, "companion_D");
  if (n < 1) throw DomainError("companion matrices need n >= 1");
  Matrix m(n + 1, std::vector<Elem>(n + 1, K->zero()));
  m[n][0] = a;
  for (int i = 0; i < n; ++i) m[i][i + 1] = K->one();
  return ProjMatrix(K, std::move(m));
}

ProjMatrix galois_apply(const ProjMatrix& M, const CyclicGaloisDatum& G, int k) {
  ProjMatrix A = M.embed_into(G.top);
  const int N = G.order;
  const int kk = ((k % N) + N) % N;
  return A.map(G.top, [&](const Elem& e) { return G.apply_power(e, kk); });
}

ProjMatrix S_matrix(const CyclicGaloisDatum& G, const Elem& b) {
  std::vector<Elem> diag;
  Elem cur = b;
  for (int i = 0; i < G.order; ++i) {
    diag.push_back(cur);
    cur = G.apply(cur);
  }
  return ProjMatrix::diagonal(G.top, diag);
}

json Cocycle::to_json() const { return json{{"galois", G.to_json()}, {"value", value.to_json()}}; }

Cocycle Cocycle::from_json(const json& j, const std::string& pointer) {
  if (!j.is_object() || !j.contains("galois") || !j.contains("value"))
    throw ParseError("cocycle needs 'galois' and 'value'", pointer);
  Cocycle c;
  c.G = CyclicGaloisDatum::from_json(j["galois"], pointer + "/galois");
  c.value = ProjMatrix::from_json(j["value"], c.G.top, pointer + "/value");
  return c;
}

Certificate verify_cocycle(const Cocycle& c) {
  const FieldPtr& L = c.G.top;
  FieldPtr F = common_field(L, c.value.field());
  if (!same_field(F, L))
    throw DomainError("cocycle entries lie outside the top field of the Galois datum", json{{"field", c.value.field()->describe()}});
  c.value.require_invertible();
  ProjMatrix prod = ProjMatrix::identity(L, c.value.size());
  for (int i = 0; i < c.G.order; ++i) prod = prod * galois_apply(c.value, c.G, i);
  Certificate cert;
  cert.kind = "cocycle";
  cert.claim = "f(sigma) sigma(f(sigma)) ... sigma^" + std::to_string(c.G.order - 1) + "(f(sigma)) = I in PGL";
  auto scalar = prod.scalar_value();
  cert.status = pass_if(scalar && !L->is_zero(*scalar));
  cert.witness = json{{"order", c.G.order}, {"product", matrix_witness(prod)}};
  if (scalar) cert.witness["scalar"] = L->elem_to_json(*scalar);
  return cert;
}

Certificate verify_cyclic_algebra_relations(const CyclicGaloisDatum& G, const Elem& a, const Elem& b) {
  const FieldPtr& L = G.top;
  const int n = G.order - 1;
  ProjMatrix C = companion_C(L, a, n), D = companion_D(L, a, n), S = S_matrix(G, b);
  const bool rel_c = (C * S).exact_equal(galois_apply(S, G, -1) * C);
  const bool rel_d = (D * S).exact_equal(galois_apply(S, G, 1) * D);
  Certificate cert;
  cert.kind = "cyclic-algebra";
  cert.claim = "C_a S_b = sigma^-1(S_b) C_a and D_a S_b = sigma(S_b) D_a";
  cert.status = pass_if(rel_c && rel_d);
  cert.witness = json{{"a", L->elem_to_json(a)},
                      {"b", L->elem_to_json(b)},
                      {"C_relation", rel_c},
                      {"D_relation", rel_d},
                      {"C_S", matrix_witness(C * S)},
                      {"D_S", matrix_witness(D * S)}};
  return cert;
}

Elem lambda0_of(const CyclicGaloisDatum& G) {
  const Field& L = *G.top;
  const int n = L.degree() - 1;
  const Field& k = *L.base();
  const Elem c0 = L.modulus().empty() ? k.zero() : L.modulus()[0];
  return (n + 1) % 2 ? k.neg(c0) : c0;
}

json NormIdentity::to_json(const Field& base) const {
  json j{{"norm_alpha_over_lambda0", base.elem_to_json(norm)}, {"beta_pow_d", base.elem_to_json(beta_d)}, {"holds", holds}};
  if (exponent) j["exponent"] = *exponent;
  return j;
}

namespace {

Elem alpha_over_lambda0(const CyclicGaloisDatum& G, const Elem& alpha) {
  const Field& L = *G.top;
  const Elem l0 = lambda0_of(G);
  if (L.base()->is_zero(l0)) throw DomainError("lambda_0 is zero: f is divisible by t");
  return L.div(alpha, L.embed(l0));
}

}  // namespace

std::optional<int> norm_exponent(const CyclicGaloisDatum& G, const Elem& alpha, const Elem& beta) {
  const Field& k = *G.base();
  auto bq = k.as_rational(beta);
  if (!bq || *bq == 0 || *bq == 1 || *bq == -1) return std::nullopt;
  NFElem N = relative_norm(NFElem(G.top, alpha_over_lambda0(G, alpha)), G);
  auto nq = k.as_rational(N.value);
  if (!nq || *nq == 0) return std::nullopt;
  // Take the valuation at a prime of beta, then confirm exactly.
  Integer p = prime_divisors(bq->get_num() != 1 && bq->get_num() != -1 ? Integer(bq->get_num()) : Integer(bq->get_den())).front();
  const int vb = valuation(*bq, p), vn = valuation(*nq, p);
  if (vb == 0 || vn % vb != 0 || vn / vb < 0) return std::nullopt;
  const int e = vn / vb;
  Rational pw = 1;
  for (int i = 0; i < e; ++i) pw *= *bq;
  if (pw != *nq) return std::nullopt;
  return e;
}

NormIdentity norm_identity(const CyclicGaloisDatum& G, const Elem& alpha, const Elem& beta, int d) {
  const Field& k = *G.base();
  NormIdentity out;
  out.norm = relative_norm(NFElem(G.top, alpha_over_lambda0(G, alpha)), G).value;
  out.beta_d = k.pow(beta, d);
  out.holds = k.eq(out.norm, out.beta_d);
  out.exponent = norm_exponent(G, alpha, beta);
  return out;
}

Certificate verify_covariance(const HomForm& H, const ProjMatrix& phi, const CyclicGaloisDatum& G, const Elem& lambda) {
  const FieldPtr& L = G.top;
  HomForm Hl = H.embed_into(L);
  HomForm lhs = substitute(Hl, phi.embed_into(L));
  MPoly sig = Hl.body().map(L, [&](const Elem& c) { return G.apply(c); });
  MPoly rhs = sig.scaled(lambda);
  Certificate cert;
  cert.kind = "covariance";
  cert.claim = "H(phi X) = lambda sigma(H)(X) coefficientwise";
  json mismatches = json::array();
  MPoly diff = lhs.body() - rhs;
  for (const auto& [e, c] : diff.terms()) mismatches.push_back(json{{"monomial", e}, {"difference", L->elem_to_json(c)}});
  cert.status = pass_if(diff.is_zero());
  cert.witness = json{{"lambda", L->elem_to_json(lambda)}, {"terms_compared", lhs.body().size()}, {"mismatches", mismatches}};
  return cert;
}

bool DescentDatum::all_passed() const {
  for (const auto& c : certificates)
    if (c.status == Status::fail) return false;
  return identity.holds;
}

json DescentDatum::to_json() const {
  const Field& L = *G.top;
  const Field& k = *G.base();
  json led = json::array();
  for (const auto& x : ledger) led.push_back(L.elem_to_json(x));
  json certs = json::array();
  for (const auto& c : certificates) certs.push_back(c.to_json());
  return json{{"galois", G.to_json()},
              {"alpha", L.elem_to_json(alpha)},
              {"beta", k.elem_to_json(beta)},
              {"lambda0", k.elem_to_json(lambda0)},
              {"lambda0_convention", "f = t^(n+1) + ... + (-1)^(n+1) lambda_0"},
              {"d", d},
              {"form", H.to_json()},
              {"cocycle", phi.to_json()},
              {"scalar_ledger", led},
              {"norm_identity", identity.to_json(k)},
              {"certificates", certs},
              {"warnings", warnings}};
}

DescentDatum build_H_f_alpha(const CyclicGaloisDatum& G, const Elem& alpha, const Elem& beta, int d) {
  const FieldPtr& L = G.top;
  const Field& k = *G.base();
  const int n = G.order - 1;
  if (n < 1) throw DomainError("the cyclic extension must have degree at least 2");
  if (d < 1) throw DomainError("degree must be positive");
  if (L->in_base(alpha)) throw DomainError("alpha lies in the base field", json{{"alpha", L->elem_to_json(alpha)}});
  if (k.is_zero(beta)) throw DomainError("beta must be nonzero");

  DescentDatum D;
  D.G = G;
  D.alpha = alpha;
  D.beta = beta;
  D.d = d;
  D.lambda0 = lambda0_of(G);
  if (d < 4) D.warnings.push_back("d < 4");
  if (n == 3 && d == 4) D.warnings.push_back("(n, d) = (3, 4) is excluded");
  if (std::gcd(d, n + 1) == 1) D.warnings.push_back("gcd(d, n+1) = 1");

  D.identity = norm_identity(G, alpha, beta, d);
  if (!D.identity.holds)
    throw Error("norm identity fails: N(alpha/lambda_0) != beta^d", D.identity.to_json(k));
  Certificate ni;
  ni.kind = "norm-identity";
  ni.claim = "N(alpha/lambda_0) = beta^" + std::to_string(d);
  ni.status = Status::pass;
  ni.witness = D.identity.to_json(k);
  D.certificates.push_back(ni);

  // Coefficients c_0 = lambda_0, c_i = lambda_0^(1-i) prod_{j<i} sigma^j(alpha).
  std::vector<Elem> coeffs{L->embed(D.lambda0)};
  Elem prod = L->one(), conj = alpha;
  const Elem l0 = L->embed(D.lambda0);
  for (int i = 1; i <= n; ++i) {
    prod = L->mul(prod, conj);
    conj = G.apply(conj);
    coeffs.push_back(L->div(prod, L->pow(l0, i - 1)));
  }
  D.H = HomForm::diagonal(L, coeffs, d);
  D.phi = companion_C(L, L->embed(beta), n);
  D.lambda = L->div(alpha, l0);
  Elem cur = D.lambda;
  for (int i = 0; i <= n; ++i) {
    D.ledger.push_back(cur);
    cur = G.apply(cur);
  }

  D.certificates.push_back(verify_covariance(D.H, D.phi, G, D.lambda));

  Elem ledger_prod = L->one();
  for (const auto& x : D.ledger) ledger_prod = L->mul(ledger_prod, x);
  Certificate tel;
  tel.kind = "ledger";
  tel.claim = "lambda sigma(lambda) ... sigma^n(lambda) = beta^d";
  tel.status = pass_if(L->eq(ledger_prod, L->embed(D.identity.beta_d)));
  tel.witness = json{{"product", L->elem_to_json(ledger_prod)}};
  D.certificates.push_back(tel);

  ProjMatrix w = D.phi.pow(static_cast<unsigned>(n + 1));
  auto scalar = w.scalar_value();
  Certificate weil;
  weil.kind = "weil";
  weil.claim = "phi^" + std::to_string(n + 1) + " = I in PGL";
  weil.status = pass_if(scalar.has_value());
  weil.witness = json{{"power", matrix_witness(w)}};
  if (scalar) weil.witness["scalar"] = L->elem_to_json(*scalar);
  D.certificates.push_back(weil);

  D.certificates.push_back(verify_cocycle(Cocycle{G, D.phi}));

  SmoothnessCertificate sm = smooth_diagonal(D.H);
  Certificate smooth;
  smooth.kind = "smooth";
  smooth.claim = "H is smooth (diagonal criterion)";
  smooth.status = pass_if(sm.smooth);
  smooth.witness = sm.to_json(*L);
  json norms = json::array();
  for (const auto& c : coeffs) norms.push_back(to_string(L->absolute_norm(c)));
  smooth.witness["coefficient_norms"] = norms;
  D.certificates.push_back(smooth);
  if (!sm.smooth) throw Error("descent form is singular", smooth.witness);
  return D;
}

HomForm build_family_Fa(int n, unsigned p, const NFElem& a) {
  if (n < 1) throw DomainError("n must be at least 1");
  if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) throw DomainError("p must be an odd prime", json{{"p", p}});
  const FieldPtr& K = a.field;
  const int d = static_cast<int>(2 * p);
  const int ip = static_cast<int>(p);
  MPoly f(K, n + 1);
  for (int i = 0; i <= n; ++i) {
    Exponent e(n + 1, 0);
    e[i] = d;
    f.add_term(e, K->one());
    for (int j = i + 1; j <= n; ++j) {
      Exponent g(n + 1, 0);
      g[i] = ip;
      g[j] = ip;
      f.add_term(g, a.value);
    }
  }
  return HomForm(n, d, std::move(f));
}

json KummerCocycle::to_json() const {
  json j = cocycle.to_json();
  j["certificate"] = certificate.to_json();
  return j;
}

KummerCocycle kummer_cocycle(unsigned p, const NFElem& m, const ProjMatrix& phi) {
  const FieldPtr& k = m.field;
  if (k->is_zero(m.value)) throw DomainError("radicand must be nonzero");
  if (!same_field(common_field(k, phi.field()), k)) throw DomainError("phi must have entries in k");
  PolyRing R(*k);
  Poly tp(p + 1, k->zero());
  tp[0] = k->neg(m.value);
  tp[p] = k->one();
  auto roots = roots_in_field(UPoly(k, tp), k);
  if (!roots.empty())
    throw DomainError("radicand is a p-th power in k", json{{"root", roots.front().to_json()}, {"p", p}});
  FieldPtr L = nf_create(UPoly(k, tp), k, "", "r");
  Elem z = L->embed(zeta(k, p).value);
  KummerCocycle out;
  out.G = make_cyclic_datum(L, L->mul(z, L->gen()));
  out.cocycle = Cocycle{out.G, phi.embed_into(L)};
  out.certificate = verify_cocycle(out.cocycle);
  out.certificate.kind = "kummer-cocycle";
  out.certificate.witness["p"] = p;
  out.certificate.witness["radicand"] = k->elem_to_json(m.value);
  return out;
}

}  // namespace twistforge
