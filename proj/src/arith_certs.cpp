#include "twistforge/arith_certs.hpp"

#include <algorithm>

namespace twistforge {

namespace {

std::vector<Integer> integral_coeffs(const UPoly& f) {
  if (!f.field->is_rationals()) throw DomainError("polynomial must be over Q");
  std::vector<Integer> out;
  for (const auto& c : f.coeffs) {
    if (c.q().get_den() != 1) throw Error("polynomial is not integral", json{{"poly", f.to_json()}});
    out.push_back(c.q().get_num());
  }
  if (out.empty() || out.back() != 1) throw Error("polynomial is not monic", json{{"poly", f.to_json()}});
  return out;
}

NmodPoly lift_product(const Zp& F, const std::vector<NmodFactor>& parts, bool reduce_multiplicity) {
  NmodPoly r{1};
  for (const auto& part : parts) {
    int e = reduce_multiplicity ? part.multiplicity - 1 : 1;
    for (int i = 0; i < e; ++i) r = nmod::mul(F, r, part.factor);
  }
  return r;
}

Integer int_det(std::vector<std::vector<Integer>> M) {
  const std::size_t n = M.size();
  Integer prev = 1;
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (M[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && M[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(M[piv], M[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        M[i][j] = M[i][j] * M[k][k] - M[i][k] * M[k][j];
        mpz_divexact(M[i][j].get_mpz_t(), M[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = M[k][k];
  }
  return negate ? Integer(-M[n - 1][n - 1]) : M[n - 1][n - 1];
}

bool next_box(std::vector<long>& v, long lo, long hi) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < hi) {
      ++v[i];
      return true;
    }
    v[i] = lo;
  }
  return false;
}

}  // namespace

json DedekindResult::to_json() const { return json{{"p", p}, {"p_maximal", p_maximal}, {"witness_gcd", witness}}; }

DedekindResult dedekind_p_maximal(const UPoly& f, std::uint64_t p) {
  std::vector<Integer> z = integral_coeffs(f);
  if (!is_prime(p)) throw Error("composite modulus", json{{"p", p}});
  const Zp F(p);
  NmodPoly fp = nmod::from_integers(F, z);
  auto parts = factor_mod_p(F, fp).factors;
  NmodPoly g = lift_product(F, parts, false);
  NmodPoly h = lift_product(F, parts, true);
  // F = (g*h - f) / p computed over Z with the canonical lifts in [0, p).
  std::vector<Integer> gz(g.begin(), g.end()), hz(h.begin(), h.end());
  std::vector<Integer> gh(gz.size() + hz.size() - 1, Integer(0));
  for (std::size_t i = 0; i < gz.size(); ++i)
    for (std::size_t j = 0; j < hz.size(); ++j) gh[i + j] += gz[i] * hz[j];
  gh.resize(std::max(gh.size(), z.size()), Integer(0));
  const Integer P = static_cast<unsigned long>(p);
  std::vector<Integer> Fz(gh.size());
  for (std::size_t i = 0; i < gh.size(); ++i) {
    Integer v = gh[i] - (i < z.size() ? z[i] : Integer(0));
    if (v % P != 0) throw Error("internal: Dedekind lift not divisible by p");
    Fz[i] = v / P;
  }
  NmodPoly Fp = nmod::from_integers(F, Fz);
  NmodPoly w = nmod::gcd(F, nmod::gcd(F, Fp, g), h);
  DedekindResult out;
  out.p = p;
  out.witness = w;
  out.p_maximal = nmod::degree(w) == 0;
  return out;
}

UPoly charpoly_over_Q(const FieldPtr& K, const Elem& x) {
  if (!K->is_extension() || !K->base()->is_rationals()) throw DomainError("field must be simple over Q");
  return UPoly(K->base(), K->charpoly_over_base(x));
}

bool PrimeSplitCertificate::unramified() const {
  return std::all_of(ramification.begin(), ramification.end(), [](int e) { return e == 1; });
}

int PrimeSplitCertificate::residue_degree() const {
  if (residue_degrees.empty()) throw Error("empty split certificate");
  for (int f : residue_degrees)
    if (f != residue_degrees.front()) throw Error("residue degrees differ", json{{"degrees", residue_degrees}});
  return residue_degrees.front();
}

json PrimeSplitCertificate::to_json() const {
  json factors = json::array();
  for (std::size_t i = 0; i < residue_factors.size(); ++i)
    factors.push_back(json{{"factor_mod_p", residue_factors[i]}, {"e", ramification[i]}, {"f", residue_degrees[i]}});
  return json{{"kind", "prime-split"},
              {"p", p},
              {"field", field->to_json()},
              {"generator", field->elem_to_json(generator)},
              {"minpoly", minpoly.to_json()},
              {"p_maximal", p_maximal},
              {"primes", factors},
              {"candidates_tried", candidates_tried}};
}

PrimeSplitCertificate split_prime_with(const FieldPtr& K, std::uint64_t p, const Elem& generator) {
  UPoly mp = charpoly_over_Q(K, generator);
  for (const auto& c : mp.coeffs)
    if (c.q().get_den() != 1) throw Error("generator is not integral", json{{"minpoly", mp.to_json()}});
  if (!PolyRing(*mp.field).is_squarefree(mp.coeffs))
    throw Error("generator is not primitive", json{{"charpoly", mp.to_json()}});
  DedekindResult ded = dedekind_p_maximal(mp, p);
  if (!ded.p_maximal) throw Error("generator is not p-maximal", ded.to_json());
  PrimeSplitCertificate cert;
  cert.p = p;
  cert.field = K;
  cert.generator = generator;
  cert.minpoly = mp;
  cert.p_maximal = true;
  const Zp F(p);
  std::vector<Integer> z;
  for (const auto& c : mp.coeffs) z.push_back(c.q().get_num());
  for (const auto& part : factor_mod_p(F, nmod::from_integers(F, z)).factors) {
    cert.residue_factors.push_back(part.factor);
    cert.ramification.push_back(part.multiplicity);
    cert.residue_degrees.push_back(nmod::degree(part.factor));
  }
  int total = 0;
  for (std::size_t i = 0; i < cert.ramification.size(); ++i) total += cert.ramification[i] * cert.residue_degrees[i];
  if (total != K->degree()) throw Error("internal: sum of e*f differs from the degree");
  return cert;
}

PrimeSplitCertificate split_prime(const FieldPtr& K, std::uint64_t p) {
  if (!K->is_extension() || !K->base()->is_rationals()) throw DomainError("split_prime needs a field simple over Q");
  if (!is_prime(p)) throw Error("composite modulus", json{{"p", p}});
  const int n = K->degree();
  const Field& L = *K;
  int tried = 0;
  auto attempt = [&](const Elem& g) -> std::optional<PrimeSplitCertificate> {
    ++tried;
    UPoly mp = charpoly_over_Q(K, g);
    for (const auto& c : mp.coeffs)
      if (c.q().get_den() != 1) return std::nullopt;
    if (!PolyRing(*mp.field).is_squarefree(mp.coeffs)) return std::nullopt;
    if (!dedekind_p_maximal(mp, p).p_maximal) return std::nullopt;
    auto cert = split_prime_with(K, p, g);
    cert.candidates_tried = tried;
    return cert;
  };
  const Elem theta = L.gen();
  for (int k = 0; k <= 40; ++k) {
    const long c = k == 0 ? 0 : (k % 2 ? (k + 1) / 2 : -(k / 2));
    if (auto cert = attempt(L.add(theta, L.from_int(c)))) return *cert;
  }
  // Z[g] is contained in Z[theta] for integral g, so when theta fails the
  // index stays divisible by p and only non-integral coordinates can help.
  bool theta_fails = false, theta_integral = false;
  {
    UPoly mt = charpoly_over_Q(K, theta);
    const bool integral = std::all_of(mt.coeffs.begin(), mt.coeffs.end(), [](const Elem& c) { return c.q().get_den() == 1; });
    theta_integral = integral;
    theta_fails = integral && !dedekind_p_maximal(mt, p).p_maximal;
  }
  // Traces tr(theta^(i+j)) give cheap integrality filters for x = v / p^k.
  std::vector<std::vector<Integer>> tr(n, std::vector<Integer>(n));
  {
    std::vector<Elem> powers{L.one()};
    for (int i = 1; i < 2 * n - 1; ++i) powers.push_back(L.mul(powers.back(), theta));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) tr[i][j] = L.trace_to_base(powers[i + j]).q().get_num();
  }
  const Integer P = static_cast<unsigned long>(p);
  for (int level = theta_fails ? 1 : 0; level <= 3; ++level) {
    Integer div = 1;
    for (int i = 0; i < level; ++i) div *= P;
    const Integer div2 = div * div;
    std::vector<long> v(n, -5);
    do {
      bool nonconstant = false;
      for (int i = 1; i < n; ++i) nonconstant = nonconstant || v[i] != 0;
      if (!nonconstant) continue;
      if (level > 0 && theta_integral) {
        bool all_divisible = true;
        for (long x : v) all_divisible = all_divisible && x % static_cast<long>(p) == 0;
        if (all_divisible) continue;
        Integer t1 = 0, t2 = 0;
        for (int i = 0; i < n; ++i) {
          t1 += tr[0][i] * v[i];
          for (int j = 0; j < n; ++j) t2 += tr[i][j] * (v[i] * v[j]);
        }
        if (t1 % div != 0 || t2 % div2 != 0) continue;
      }
      Coords c;
      for (int i = 0; i < n; ++i) {
        Rational q(Integer(v[i]), div);
        q.canonicalize();
        c.push_back(Elem(q));
      }
      if (auto cert = attempt(L.from_coords(c))) return *cert;
    } while (next_box(v, -5, 5));
  }
  throw SearchExhausted("no p-maximal generator found within search bound",
                        json{{"p", p}, {"candidates_tried", tried}, {"field", K->to_json()}});
}

bool local_norm_unramified(const Rational& beta, const PrimeSplitCertificate& cert, const CyclicGaloisDatum& G) {
  if (!same_field(cert.field, G.top)) throw DomainError("split certificate and Galois datum disagree on the field");
  if (!cert.unramified()) throw Error("prime is ramified: unramified local criterion does not apply", cert.to_json());
  if (beta == 0) throw Error("beta must be nonzero");
  const int f = cert.residue_degree();
  const int v = valuation(beta, Integer(static_cast<unsigned long>(cert.p)));
  return ((v % f) + f) % f == 0;
}

json NormObstructionCertificate::to_json() const {
  return json{{"kind", "non-norm"},
              {"beta", twistforge::to_string(beta)},
              {"p", p},
              {"residue_degree", residue_degree},
              {"valuation", valuation},
              {"split", split.to_json()},
              {"scanned", scanned}};
}

NormObstructionCertificate non_norm_certificate(const Rational& beta, const CyclicGaloisDatum& G) {
  if (!G.base()->is_rationals()) throw DomainError("non-norm certificates are issued over Q only");
  if (beta == 0) throw Error("beta must be nonzero");
  std::vector<Integer> primes = prime_divisors(beta.get_num());
  for (const auto& q : prime_divisors(beta.get_den())) primes.push_back(q);
  std::sort(primes.begin(), primes.end());
  json scanned = json::array();
  for (const auto& q : primes) {
    const std::uint64_t p = to_u64(q);
    PrimeSplitCertificate cert;
    try {
      cert = split_prime(G.top, p);
    } catch (const SearchExhausted&) {
      scanned.push_back(json{{"p", p}, {"status", "no p-maximal generator"}});
      continue;
    }
    if (!cert.unramified()) {
      scanned.push_back(json{{"p", p}, {"status", "ramified"}});
      continue;
    }
    if (local_norm_unramified(beta, cert, G)) {
      scanned.push_back(json{{"p", p}, {"status", "local norm"}});
      continue;
    }
    NormObstructionCertificate out;
    out.beta = beta;
    out.p = p;
    out.residue_degree = cert.residue_degree();
    out.valuation = valuation(beta, q);
    out.split = cert;
    scanned.push_back(json{{"p", p}, {"status", "obstruction"}});
    out.scanned = scanned;
    return out;
  }
  throw Error("no obstruction found among candidate primes", json{{"beta", twistforge::to_string(beta)}, {"scanned", scanned}});
}

json NormSearchResult::to_json(const Field& K) const {
  json j{{"found", element.has_value()}, {"radius", radius}, {"examined", examined}};
  if (element) {
    j["element"] = K.elem_to_json(*element);
    j["norm"] = twistforge::to_string(norm);
  }
  return j;
}

NormSearchResult find_element_of_norm(const FieldPtr& K, const Integer& target, int bound) {
  if (!K->is_extension() || !K->base()->is_rationals()) throw DomainError("norm search needs a field simple over Q");
  const Field& L = *K;
  const int n = L.degree();
  // Multiplication matrices of the power basis, cleared to integers.
  std::vector<Matrix> basis;
  Elem power = L.one();
  for (int i = 0; i < n; ++i) {
    basis.push_back(L.mult_matrix(power));
    power = L.mul(power, L.gen());
  }
  for (const auto& M : basis)
    for (const auto& row : M)
      for (const auto& e : row)
        if (e.q().get_den() != 1) throw DomainError("norm search needs an integral defining polynomial");
  NormSearchResult out;
  const Integer abs_target = abs(target);
  std::vector<std::vector<Integer>> A(n, std::vector<Integer>(n));
  for (int r = 1; r <= bound; ++r) {
    std::vector<long> v(n, -r);
    do {
      long mx = 0;
      for (int i = 0; i < n; ++i) mx = std::max(mx, std::labs(v[i]));
      if (mx != r) continue;
      bool rational = true;
      for (int i = 1; i < n; ++i) rational = rational && v[i] == 0;
      if (rational) continue;
      ++out.examined;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Integer s = 0;
          for (int i = 0; i < n; ++i)
            if (v[i]) s += basis[i][a][b].q().get_num() * v[i];
          A[a][b] = s;
        }
      Integer N = int_det(A);
      if (abs(N) == abs_target) {
        Coords c;
        for (int i = 0; i < n; ++i) c.push_back(Elem(Rational(v[i])));
        out.element = L.from_coords(c);
        out.norm = Rational(N);
        out.radius = r;
        return out;
      }
    } while (next_box(v, -r, r));
    out.radius = r;
  }
  return out;
}

}  // namespace twistforge
