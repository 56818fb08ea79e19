#include "twistforge/qfactor.hpp"

#include <algorithm>
#include <bitset>
#include <numeric>

#include "twistforge/nmod_poly.hpp"

namespace twistforge {

namespace {

void ztrim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int zdeg(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }

Integer content(const ZPoly& f) {
  Integer g = 0;
  for (const auto& c : f) g = gcd(g, c);
  return g;
}

ZPoly make_primitive(ZPoly f) {
  ztrim(f);
  if (f.empty()) return f;
  Integer c = content(f);
  if (f.back() < 0) c = -c;
  for (auto& x : f) x /= c;
  return f;
}

// Symmetric residue in (-M/2, M/2].
Integer symmetric(const Integer& v, const Integer& M) {
  Integer r = v % M;
  if (r < 0) r += M;
  if (2 * r > M) r -= M;
  return r;
}

Integer nonneg(const Integer& v, const Integer& M) {
  Integer r = v % M;
  if (r < 0) r += M;
  return r;
}

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  ztrim(r);
  return r;
}

ZPoly zmod(ZPoly a, const Integer& M) {
  for (auto& x : a) x = nonneg(x, M);
  ztrim(a);
  return a;
}

ZPoly zmulmod(const ZPoly& a, const ZPoly& b, const Integer& M) { return zmod(zmul(a, b), M); }

// Exact division over Z; nullopt when b does not divide a.
std::optional<ZPoly> zdivide(const ZPoly& a, const ZPoly& b) {
  if (b.empty()) return std::nullopt;
  if (a.empty()) return ZPoly{};
  if (a.size() < b.size()) return std::nullopt;
  ZPoly r = a;
  ZPoly q(a.size() - b.size() + 1, Integer(0));
  for (std::size_t shift = q.size(); shift-- > 0;) {
    const Integer& top = r[shift + b.size() - 1];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), b.back().get_mpz_t())) return std::nullopt;
    Integer c = top / b.back();
    for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] -= c * b[j];
    q[shift] = c;
  }
  for (const auto& x : r)
    if (x != 0) return std::nullopt;
  ztrim(q);
  return q;
}

NmodPoly to_nmod(const Zp& F, const ZPoly& f) { return nmod::from_integers(F, f); }

ZPoly from_nmod(const NmodPoly& f) {
  ZPoly r;
  r.reserve(f.size());
  for (auto c : f) r.emplace_back(static_cast<unsigned long>(c));
  return r;
}

std::vector<std::uint64_t> small_primes(std::size_t count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 3; out.size() < count; p += 2)
    if (is_prime(p)) out.push_back(p);
  return out;
}

// One linear Hensel lift: g = A*B mod p (A carries lc(g), B monic), lifted
// until the modulus reaches at least `target`. Everything is reduced mod M_final.
void hensel_lift(const ZPoly& g, ZPoly& A, ZPoly& B, std::uint64_t p, const Integer& target) {
  const Zp F(p);
  auto [gg, s, t] = nmod::xgcd(F, to_nmod(F, A), to_nmod(F, B));
  if (nmod::degree(gg) != 0) throw Error("Hensel lifting needs coprime factors mod p");
  const Integer P = static_cast<unsigned long>(p);
  Integer m = P;
  const NmodPoly Bp = to_nmod(F, B);
  const NmodPoly Ap = to_nmod(F, A);
  Integer lc = g.back();
  while (m < target) {
    Integer next = m * P;
    // e = (g - A*B) / m, mod p
    ZPoly diff = zmod(g, next);
    ZPoly ab = zmulmod(A, B, next);
    diff.resize(std::max(diff.size(), ab.size()), Integer(0));
    for (std::size_t i = 0; i < ab.size(); ++i) diff[i] -= ab[i];
    diff = zmod(diff, next);
    for (auto& x : diff) x /= m;
    NmodPoly e = to_nmod(F, diff);
    auto [q, sigma] = nmod::divrem(F, nmod::mul(F, e, s), Bp);
    NmodPoly tau = nmod::add(F, nmod::mul(F, e, t), nmod::mul(F, q, Ap));
    ZPoly tz = from_nmod(tau), sz = from_nmod(sigma);
    A.resize(std::max(A.size(), tz.size()), Integer(0));
    for (std::size_t i = 0; i < tz.size(); ++i) A[i] += m * tz[i];
    B.resize(std::max(B.size(), sz.size()), Integer(0));
    for (std::size_t i = 0; i < sz.size(); ++i) B[i] += m * sz[i];
    A = zmod(A, next);
    B = zmod(B, next);
    A.back() = nonneg(lc, next);
    m = next;
  }
}

// Lifts g = lc * prod(monic f_i) mod p to mod M = p^k; returns monic lifts.
std::vector<ZPoly> multi_lift(const ZPoly& g, const std::vector<NmodPoly>& factors, std::uint64_t p,
                              const Integer& M) {
  const Zp F(p);
  std::vector<ZPoly> out;
  ZPoly current = zmod(g, M);
  std::size_t i = 0;
  for (; i + 1 < factors.size(); ++i) {
    const Integer lc = current.back();
    NmodPoly rest = nmod::from_integers(F, {Integer(1)});
    for (std::size_t j = i + 1; j < factors.size(); ++j) rest = nmod::mul(F, rest, factors[j]);
    ZPoly A = from_nmod(nmod::scale(F, factors[i], F.from_integer(lc)));
    A.back() = lc;
    ZPoly B = from_nmod(rest);
    hensel_lift(current, A, B, p, M);
    // monic version of A mod M
    Integer inv;
    mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), M.get_mpz_t());
    for (auto& x : A) x = nonneg(x * inv, M);
    out.push_back(std::move(A));
    current = std::move(B);
  }
  Integer inv;
  mpz_invert(inv.get_mpz_t(), current.back().get_mpz_t(), M.get_mpz_t());
  for (auto& x : current) x = nonneg(x * inv, M);
  out.push_back(std::move(current));
  return out;
}

Integer factor_coefficient_bound(const ZPoly& g) {
  Integer norm2 = 0;
  for (const auto& c : g) norm2 += c * c;
  Integer b = isqrt(norm2) + 1;
  Integer pow2 = 1;
  mpz_mul_2exp(pow2.get_mpz_t(), pow2.get_mpz_t(), static_cast<mp_bitcnt_t>(std::max(0, zdeg(g) - 1)));
  return abs(g.back()) * b * pow2;
}

struct PrimeChoice {
  std::uint64_t p = 0;
  std::vector<NmodPoly> factors;
};

// Scans small primes; returns true with `irreducible` set when the degree
// patterns alone decide irreducibility.
PrimeChoice choose_prime(const ZPoly& g, IrreducibilityCertificate* cert, bool& irreducible) {
  const int n = zdeg(g);
  std::bitset<kMaxFactorDegree + 1> possible;
  possible.set();
  PrimeChoice best;
  std::size_t tried = 0;
  irreducible = false;
  for (std::uint64_t p : small_primes(60)) {
    if (tried >= 12) break;
    if (mpz_divisible_ui_p(g.back().get_mpz_t(), p)) continue;
    const Zp F(p);
    NmodPoly gp = to_nmod(F, g);
    if (nmod::degree(nmod::gcd(F, gp, nmod::derivative(F, gp))) != 0) continue;
    ++tried;
    NmodFactorization fac = factor_mod_p(F, gp);
    std::vector<int> pattern;
    std::bitset<kMaxFactorDegree + 1> sums;
    sums.set(0);
    for (const auto& f : fac.factors) {
      int d = nmod::degree(f.factor);
      pattern.push_back(d);
      sums |= sums << d;
    }
    if (cert) {
      cert->primes.push_back(p);
      cert->patterns.push_back(pattern);
    }
    possible &= sums;
    if (best.p == 0 || fac.factors.size() < best.factors.size()) {
      best.p = p;
      best.factors.clear();
      for (const auto& f : fac.factors) best.factors.push_back(f.factor);
    }
    if (fac.factors.size() == 1) {
      irreducible = true;
      if (cert) cert->method = "mod-p";
      return best;
    }
    bool only_trivial = true;
    for (int d = 1; d < n; ++d)
      if (possible.test(d)) only_trivial = false;
    if (only_trivial) {
      irreducible = true;
      if (cert) cert->method = "degree-pattern";
      return best;
    }
  }
  if (best.p == 0) throw Error("no usable prime for modular factorization");
  return best;
}

// Irreducible factors of a squarefree primitive g with deg >= 1.
std::vector<ZPoly> zassenhaus(ZPoly g, IrreducibilityCertificate* cert) {
  if (zdeg(g) == 1) {
    if (cert) cert->method = "degree-1";
    return {g};
  }
  bool irreducible = false;
  PrimeChoice choice = choose_prime(g, cert, irreducible);
  if (irreducible) return {g};
  if (cert) cert->method = "zassenhaus";

  const Integer P = static_cast<unsigned long>(choice.p);
  const Integer bound = 2 * factor_coefficient_bound(g) + 1;
  Integer M = P;
  while (M < bound) M *= P;
  std::vector<ZPoly> lifted = multi_lift(g, choice.factors, choice.p, M);

  std::vector<ZPoly> result;
  std::vector<bool> used(lifted.size(), false);
  std::size_t remaining = lifted.size();
  for (std::size_t s = 1; 2 * s <= remaining; ++s) {
    bool found = true;
    while (found) {
      found = false;
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < lifted.size(); ++i)
        if (!used[i]) idx.push_back(i);
      if (2 * s > idx.size()) break;
      std::vector<bool> select(idx.size(), false);
      std::fill(select.end() - static_cast<long>(s), select.end(), true);
      do {
        ZPoly cand{g.back()};
        for (std::size_t k = 0; k < idx.size(); ++k)
          if (select[k]) cand = zmulmod(cand, lifted[idx[k]], M);
        for (auto& x : cand) x = symmetric(x, M);
        ztrim(cand);
        cand = make_primitive(cand);
        if (cand.empty() || zdeg(cand) < 1) continue;
        if (!mpz_divisible_p(g[0].get_mpz_t(), cand[0].get_mpz_t()) && cand[0] != 0) continue;
        auto q = zdivide(g, cand);
        if (!q) continue;
        result.push_back(cand);
        g = make_primitive(*q);
        for (std::size_t k = 0; k < idx.size(); ++k)
          if (select[k]) used[idx[k]] = true;
        remaining -= s;
        found = true;
        break;
      } while (std::next_permutation(select.begin(), select.end()));
    }
  }
  if (zdeg(g) >= 1) result.push_back(g);
  return result;
}

bool zless(const ZPoly& a, const ZPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

ZPoly to_zpoly(const UPoly& f) {
  if (!f.field->is_rationals()) throw DomainError("polynomial is not over Q", json{{"field", f.field->describe()}});
  return primitive_part(*f.field, f.coeffs);
}

}  // namespace

ZPoly primitive_part(const Field& Q, const Poly& f) {
  (void)Q;
  Integer den = 1;
  for (const auto& c : f) den = lcm(den, c.q().get_den());
  ZPoly z;
  z.reserve(f.size());
  for (const auto& c : f) z.push_back(c.q().get_num() * (den / c.q().get_den()));
  return make_primitive(z);
}

UPoly zpoly_to_upoly(const ZPoly& z) {
  std::vector<Rational> c;
  c.reserve(z.size());
  for (const auto& x : z) c.emplace_back(x);
  return UPoly::over_q(c);
}

std::vector<std::pair<ZPoly, int>> squarefree_over_Q(const ZPoly& f) {
  std::vector<std::pair<ZPoly, int>> out;
  if (zdeg(f) < 1) return out;
  // Fast path: squarefree mod some small prime of good reduction.
  for (std::uint64_t p : small_primes(8)) {
    if (mpz_divisible_ui_p(f.back().get_mpz_t(), p)) continue;
    const Zp F(p);
    NmodPoly fp = to_nmod(F, f);
    if (nmod::degree(nmod::gcd(F, fp, nmod::derivative(F, fp))) == 0) {
      out.emplace_back(make_primitive(f), 1);
      return out;
    }
  }
  const Field& Q = *Field::rationals();
  PolyRing R(Q);
  Poly a = zpoly_to_upoly(f).coeffs;
  Poly da = R.derivative(a);
  Poly a0 = R.gcd(a, da);
  Poly b = R.exact_quo(a, a0);
  Poly c = R.exact_quo(da, a0);
  Poly d = R.sub(c, R.derivative(b));
  for (int i = 1; PolyRing::degree(b) > 0; ++i) {
    Poly ai = R.gcd(b, d);
    b = R.exact_quo(b, ai);
    c = R.exact_quo(d, ai);
    d = R.sub(c, R.derivative(b));
    if (PolyRing::degree(ai) > 0) out.emplace_back(primitive_part(Q, ai), i);
  }
  return out;
}

QFactorization factor_over_Q(const UPoly& f) {
  if (f.is_zero()) throw Error("factorization of the zero polynomial");
  if (f.degree() > kMaxFactorDegree)
    throw Error("degree exceeds factorization bound", json{{"degree", f.degree()}, {"bound", kMaxFactorDegree}});
  QFactorization out;
  ZPoly z = to_zpoly(f);
  std::vector<std::pair<ZPoly, int>> parts;
  for (auto& [g, e] : squarefree_over_Q(z))
    for (auto& h : zassenhaus(g, nullptr)) parts.emplace_back(std::move(h), e);
  std::sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) { return zless(x.first, y.first); });
  Rational prod_lc = 1;
  for (auto& [g, e] : parts) {
    Rational lc(g.back());
    for (int i = 0; i < e; ++i) prod_lc *= lc;
    out.factors.push_back({zpoly_to_upoly(g), e});
  }
  out.unit = f.coeffs.back().q() / prod_lc;
  return out;
}

IrreducibilityCertificate certify_irreducible_over_Q(const UPoly& f) {
  IrreducibilityCertificate cert;
  if (f.degree() < 1) throw Error("irreducibility of a constant");
  if (f.degree() > kMaxFactorDegree)
    throw Error("degree exceeds factorization bound", json{{"degree", f.degree()}, {"bound", kMaxFactorDegree}});
  ZPoly z = to_zpoly(f);
  auto sqf = squarefree_over_Q(z);
  if (sqf.size() != 1 || sqf[0].second != 1) {
    cert.irreducible = false;
    cert.method = "squarefree";
    cert.factor = zpoly_to_upoly(sqf.front().first);
    return cert;
  }
  auto factors = zassenhaus(z, &cert);
  cert.irreducible = factors.size() == 1;
  if (!cert.irreducible) cert.factor = zpoly_to_upoly(factors.front());
  return cert;
}

json IrreducibilityCertificate::to_json() const {
  json j{{"irreducible", irreducible}, {"method", method}, {"primes", primes}, {"patterns", patterns}};
  if (!irreducible && factor.field) j["factor"] = factor.to_json();
  return j;
}

}  // namespace twistforge
