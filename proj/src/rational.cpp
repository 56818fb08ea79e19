#include "twistforge/rational.hpp"

#include <array>

#include "twistforge/errors.hpp"

namespace twistforge {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Integer parse_integer(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) throw ParseError("malformed integer '" + std::string(text) + "'");
  std::string s(text);
  if (s.front() == '+') s.erase(0, 1);
  return Integer(s, 10);
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  Integer num = parse_integer(text.substr(0, slash));
  std::string_view den_text = text.substr(slash + 1);
  if (!all_digits(den_text)) throw ParseError("malformed rational '" + std::string(text) + "'");
  Integer den(std::string(den_text), 10);
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Integer& z) { return z.get_str(10); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str(10);
  return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  static constexpr std::array<unsigned, 13> kBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (unsigned b : kBases) {
    if (n == b) return true;
    if (n % b == 0) return false;
  }
  Integer d = n - 1;
  unsigned long s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d /= 2;
    ++s;
  }
  const Integer n_minus_1 = n - 1;
  for (unsigned b : kBases) {
    Integer x;
    Integer base = b;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n_minus_1) continue;
    bool composite = true;
    for (unsigned long r = 1; r < s; ++r) {
      x = (x * x) % n;
      if (x == n_minus_1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_prime(std::uint64_t n) { return is_prime(Integer(static_cast<unsigned long>(n))); }

int valuation(const Integer& n, const Integer& p) {
  if (n == 0) throw Error("valuation of zero");
  Integer m = abs(n);
  int v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
    m /= p;
    ++v;
  }
  return v;
}

int valuation(const Rational& q, const Integer& p) {
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

bool is_perfect_square(const Integer& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

Integer isqrt(const Integer& n) {
  if (n < 0) throw Error("isqrt of negative integer");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::vector<Integer> prime_divisors(const Integer& n) {
  std::vector<Integer> out;
  Integer m = abs(n);
  if (m < 2) return out;
  for (Integer q = 2; q * q <= m; ++q) {
    if (m % q == 0) {
      out.push_back(q);
      while (m % q == 0) m /= q;
    }
  }
  if (m > 1) out.push_back(m);
  return out;
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

std::uint64_t to_u64(const Integer& z) {
  if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64) throw Error("integer does not fit in 64 bits");
  return static_cast<std::uint64_t>(mpz_get_ui(z.get_mpz_t()));
}

std::uint64_t euler_phi(std::uint64_t m) {
  std::uint64_t result = m;
  for (std::uint64_t q = 2; q * q <= m; ++q) {
    if (m % q == 0) {
      while (m % q == 0) m /= q;
      result -= result / q;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

std::uint64_t reduce_mod_p(const Rational& q, std::uint64_t p) {
  Integer P = static_cast<unsigned long>(p);
  Integer den = q.get_den() % P;
  if (den == 0) throw Error("denominator divisible by p", json{{"p", p}, {"value", to_string(q)}});
  Integer inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t());
  Integer r = (q.get_num() % P) * inv % P;
  if (r < 0) r += P;
  return mpz_get_ui(r.get_mpz_t());
}

}  // namespace twistforge
