#include "twistforge/nmod_poly.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "twistforge/errors.hpp"

namespace twistforge {

Zp::Zp(std::uint64_t p) : p_(p) {
  if (p < 2 || p >= (std::uint64_t{1} << 63)) throw Error("prime modulus out of range", json{{"p", p}});
  if (!is_prime(p)) throw Error("composite modulus", json{{"p", p}});
}

std::uint64_t Zp::pow(std::uint64_t a, std::uint64_t e) const noexcept {
  std::uint64_t r = 1 % p_;
  a %= p_;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t Zp::inv(std::uint64_t a) const {
  if (a % p_ == 0) throw Error("inverse of zero in F_p");
  return pow(a, p_ - 2);
}

std::uint64_t Zp::from_signed(long long v) const noexcept {
  long long m = v % static_cast<long long>(p_);
  if (m < 0) m += static_cast<long long>(p_);
  return static_cast<std::uint64_t>(m);
}

std::uint64_t Zp::from_integer(const Integer& z) const {
  Integer P = static_cast<unsigned long>(p_);
  Integer r = z % P;
  if (r < 0) r += P;
  return mpz_get_ui(r.get_mpz_t());
}

namespace nmod {

void trim(NmodPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const NmodPoly& f) { return static_cast<int>(f.size()) - 1; }

NmodPoly add(const Zp& F, const NmodPoly& a, const NmodPoly& b) {
  NmodPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t x = i < a.size() ? a[i] : 0;
    std::uint64_t y = i < b.size() ? b[i] : 0;
    r[i] = F.add(x, y);
  }
  trim(r);
  return r;
}

NmodPoly sub(const Zp& F, const NmodPoly& a, const NmodPoly& b) {
  NmodPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t x = i < a.size() ? a[i] : 0;
    std::uint64_t y = i < b.size() ? b[i] : 0;
    r[i] = F.sub(x, y);
  }
  trim(r);
  return r;
}

NmodPoly mul(const Zp& F, const NmodPoly& a, const NmodPoly& b) {
  if (a.empty() || b.empty()) return {};
  NmodPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

NmodPoly scale(const Zp& F, const NmodPoly& a, std::uint64_t c) {
  NmodPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
  trim(r);
  return r;
}

std::pair<NmodPoly, NmodPoly> divrem(const Zp& F, const NmodPoly& a, const NmodPoly& b) {
  if (b.empty()) throw Error("polynomial division by zero");
  NmodPoly r = a;
  if (r.size() < b.size()) return {{}, r};
  NmodPoly q(r.size() - b.size() + 1, 0);
  const std::uint64_t inv_lc = F.inv(b.back());
  for (std::size_t shift = q.size(); shift-- > 0;) {
    std::uint64_t c = F.mul(r[shift + b.size() - 1], inv_lc);
    q[shift] = c;
    if (c != 0)
      for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] = F.sub(r[shift + j], F.mul(c, b[j]));
  }
  trim(q);
  trim(r);
  return {q, r};
}

NmodPoly rem(const Zp& F, const NmodPoly& a, const NmodPoly& b) { return divrem(F, a, b).second; }
NmodPoly quo(const Zp& F, const NmodPoly& a, const NmodPoly& b) { return divrem(F, a, b).first; }

NmodPoly monic(const Zp& F, const NmodPoly& a) {
  if (a.empty()) return a;
  return scale(F, a, F.inv(a.back()));
}

NmodPoly gcd(const Zp& F, NmodPoly a, NmodPoly b) {
  while (!b.empty()) {
    NmodPoly r = rem(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(F, a);
}

std::tuple<NmodPoly, NmodPoly, NmodPoly> xgcd(const Zp& F, const NmodPoly& a, const NmodPoly& b) {
  NmodPoly r0 = a, r1 = b, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
  while (!r1.empty()) {
    auto [q, r] = divrem(F, r0, r1);
    NmodPoly s = sub(F, s0, mul(F, q, s1));
    NmodPoly t = sub(F, t0, mul(F, q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
    t0 = std::move(t1);
    t1 = std::move(t);
  }
  if (r0.empty()) return {r0, s0, t0};
  std::uint64_t inv = F.inv(r0.back());
  return {scale(F, r0, inv), scale(F, s0, inv), scale(F, t0, inv)};
}

NmodPoly derivative(const Zp& F, const NmodPoly& a) {
  if (a.size() <= 1) return {};
  NmodPoly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = F.mul(a[i], i % F.p());
  trim(r);
  return r;
}

std::uint64_t eval(const Zp& F, const NmodPoly& a, std::uint64_t x) {
  std::uint64_t r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, x), a[i]);
  return r;
}

NmodPoly mulmod(const Zp& F, const NmodPoly& a, const NmodPoly& b, const NmodPoly& m) {
  return rem(F, mul(F, a, b), m);
}

NmodPoly powmod(const Zp& F, const NmodPoly& a, const Integer& e, const NmodPoly& m) {
  NmodPoly result = rem(F, NmodPoly{1}, m);
  NmodPoly base = rem(F, a, m);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = mulmod(F, result, result, m);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mulmod(F, result, base, m);
  }
  return result;
}

NmodPoly from_integers(const Zp& F, const std::vector<Integer>& coeffs) {
  NmodPoly r(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) r[i] = F.from_integer(coeffs[i]);
  trim(r);
  return r;
}

}  // namespace nmod

namespace {

using namespace nmod;

bool poly_less(const NmodPoly& a, const NmodPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

void sqf_monic(const Zp& F, const NmodPoly& f, int mult_scale, std::map<NmodPoly, int, decltype(&poly_less)>& out) {
  if (degree(f) <= 0) return;
  NmodPoly fp = derivative(F, f);
  NmodPoly c;
  if (fp.empty()) {
    c = f;
  } else {
    c = gcd(F, f, fp);
    NmodPoly w = quo(F, f, c);
    int i = 1;
    while (degree(w) > 0) {
      NmodPoly y = gcd(F, w, c);
      NmodPoly z = quo(F, w, y);
      if (degree(z) > 0) out[monic(F, z)] += i * mult_scale;
      ++i;
      w = y;
      c = quo(F, c, y);
    }
  }
  if (degree(c) > 0) {
    // c is a p-th power: take the p-th root coefficientwise.
    const std::uint64_t p = F.p();
    NmodPoly root;
    for (std::size_t k = 0; k < c.size(); k += p) root.push_back(c[k]);
    trim(root);
    sqf_monic(F, monic(F, root), mult_scale * static_cast<int>(p), out);
  }
}

std::vector<std::pair<NmodPoly, int>> distinct_degree(const Zp& F, NmodPoly f) {
  std::vector<std::pair<NmodPoly, int>> out;
  const NmodPoly x = {0, 1};
  NmodPoly h = rem(F, x, f);
  const Integer p = static_cast<unsigned long>(F.p());
  for (int i = 1; 2 * i <= degree(f); ++i) {
    h = powmod(F, h, p, f);
    NmodPoly g = gcd(F, f, sub(F, h, x));
    if (degree(g) > 0) {
      out.emplace_back(g, i);
      f = quo(F, f, g);
      h = rem(F, h, f);
    }
  }
  if (degree(f) > 0) out.emplace_back(monic(F, f), degree(f));
  return out;
}

void equal_degree(const Zp& F, const NmodPoly& g, int d, std::mt19937_64& rng, std::vector<NmodPoly>& out) {
  if (degree(g) == d) {
    out.push_back(g);
    return;
  }
  const int n = degree(g);
  Integer exponent;
  if (F.p() != 2) {
    Integer q;
    mpz_ui_pow_ui(q.get_mpz_t(), F.p(), static_cast<unsigned long>(d));
    exponent = (q - 1) / 2;
  }
  std::uniform_int_distribution<std::uint64_t> coeff(0, F.p() - 1);
  while (true) {
    NmodPoly a(n);
    for (auto& c : a) c = coeff(rng);
    trim(a);
    if (degree(a) <= 0) continue;
    NmodPoly b;
    if (F.p() == 2) {
      NmodPoly term = a;
      b = a;
      for (int j = 1; j < d; ++j) {
        term = mulmod(F, term, term, g);
        b = add(F, b, term);
      }
    } else {
      b = sub(F, powmod(F, a, exponent, g), NmodPoly{1});
    }
    NmodPoly s = gcd(F, g, b);
    if (degree(s) > 0 && degree(s) < n) {
      equal_degree(F, s, d, rng, out);
      equal_degree(F, quo(F, g, s), d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<NmodFactor> squarefree_mod_p(const Zp& F, const NmodPoly& f) {
  if (f.empty()) throw Error("squarefree decomposition of zero polynomial");
  std::map<NmodPoly, int, decltype(&poly_less)> parts(&poly_less);
  sqf_monic(F, monic(F, f), 1, parts);
  std::vector<NmodFactor> out;
  for (auto& [g, e] : parts) out.push_back({g, e});
  return out;
}

NmodFactorization factor_mod_p(const Zp& F, const NmodPoly& f) {
  if (f.empty()) throw Error("factorization of zero polynomial");
  NmodFactorization result;
  result.leading = f.back();
  std::mt19937_64 rng(0x7457f0e5u);
  std::map<NmodPoly, int, decltype(&poly_less)> acc(&poly_less);
  for (const auto& [part, e] : squarefree_mod_p(F, f)) {
    for (const auto& [block, d] : distinct_degree(F, part)) {
      std::vector<NmodPoly> pieces;
      equal_degree(F, block, d, rng, pieces);
      for (auto& piece : pieces) acc[monic(F, piece)] += e;
    }
  }
  for (auto& [g, e] : acc) result.factors.push_back({g, e});
  return result;
}

bool is_irreducible_mod_p(const Zp& F, const NmodPoly& f) {
  if (degree(f) <= 0) return false;
  auto fac = factor_mod_p(F, f);
  return fac.factors.size() == 1 && fac.factors[0].multiplicity == 1;
}

std::vector<std::uint64_t> roots_mod_p(const Zp& F, const NmodPoly& f) {
  std::vector<std::uint64_t> roots;
  if (degree(f) <= 0) return roots;
  for (const auto& fac : factor_mod_p(F, f).factors)
    if (degree(fac.factor) == 1) roots.push_back(F.neg(fac.factor[0]));
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace twistforge
