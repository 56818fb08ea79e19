#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "twistforge/nmod_poly.hpp"
#include "twistforge/numfield.hpp"

using namespace twistforge;

namespace {

UPoly q_poly(const std::vector<long long>& c) { return UPoly::over_q(c); }

FieldPtr p2_field() { return nf_create(q_poly({-64, 0, 12, 1}), Field::rationals(), "", "a"); }
FieldPtr p3_field() { return nf_create(q_poly({3, -4, 2, 1, 1}), Field::rationals(), "", "a"); }
FieldPtr p4_field() { return nf_create(q_poly({-1, 3, 3, -4, -1, 1}), cyclotomic(10), "", "a"); }

// Integer polynomials (constant first) for the Moebius-product oracle.
using IPoly = std::vector<long long>;

IPoly ip_mul(const IPoly& a, const IPoly& b) {
  IPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

IPoly ip_div_monic(IPoly a, const IPoly& b) {
  IPoly q(a.size() - b.size() + 1, 0);
  for (std::size_t s = q.size(); s-- > 0;) {
    q[s] = a[s + b.size() - 1];
    for (std::size_t j = 0; j < b.size(); ++j) a[s + j] -= q[s] * b[j];
  }
  return q;
}

int mobius(unsigned n) {
  int mu = 1;
  for (unsigned p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      mu = -mu;
    }
  return n > 1 ? -mu : mu;
}

IPoly phi_oracle(unsigned m) {
  IPoly num{1}, den{1};
  for (unsigned d = 1; d <= m; ++d) {
    if (m % d) continue;
    IPoly x(d + 1, 0);
    x[0] = -1;
    x[d] = 1;
    int mu = mobius(m / d);
    if (mu == 1) num = ip_mul(num, x);
    if (mu == -1) den = ip_mul(den, x);
  }
  // sign: prod over (t^d - 1) has the right sign after division
  IPoly q = ip_div_monic(num, den);
  return q;
}

// Expansion of a 3x3 determinant by cofactors.
Rational det3(const std::vector<std::vector<Rational>>& M) {
  return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
         M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
}

}  // namespace

TEST_CASE("nf_create") {
  auto Qi = nf_create(q_poly({1, 0, 1}), Field::rationals());
  CHECK(Qi->degree() == 2);
  CHECK(p2_field()->degree() == 3);
  FieldIrreducibility cert;
  auto L = nf_create(q_poly({-1, 3, 3, -4, -1, 1}), cyclotomic(10), "", "a", &cert);
  CHECK(L->degree() == 5);
  CHECK(L->absolute_degree() == 20);
  CHECK(cert.method == "trager");
  CHECK(cert.norm_degree == 20);
  CHECK(cert.irreducible);
  try {
    nf_create(q_poly({-1, 0, 1}), Field::rationals());
    FAIL("reducible polynomial accepted");
  } catch (const Error& e) {
    CHECK(e.witness().contains("factors"));
  }
  CHECK_THROWS(nf_create(q_poly({1, 0, 2}), Field::rationals()));
  CHECK_THROWS_AS(nf_create(q_poly({-2, 1, 1}), L), DomainError);
  // x^2 + 1 splits over Q(zeta_4)
  CHECK_THROWS(nf_create(q_poly({1, 0, 1}), cyclotomic(4)));
}

TEST_CASE("cyclotomic fields") {
  CHECK(cyclotomic(1)->is_rationals());
  CHECK(PolyRing(*Field::rationals()).eq(cyclotomic(4)->modulus(), q_poly({1, 0, 1}).coeffs));
  for (unsigned m : {3u, 5u, 8u, 10u, 12u, 15u, 30u}) {
    IPoly o = phi_oracle(m);
    CHECK(PolyRing(*Field::rationals()).eq(cyclotomic_polynomial(m), q_poly(std::vector<long long>(o.begin(), o.end())).coeffs));
  }
  CHECK(PolyRing(*Field::rationals()).eq(cyclotomic(10)->modulus(), q_poly({1, -1, 1, -1, 1}).coeffs));
  auto K = cyclotomic(10);
  NFElem z = zeta(K, 10);
  CHECK(pow(z, 10) == NFElem(K, K->one()));
  CHECK_FALSE(pow(z, 5) == NFElem(K, K->one()));
  CHECK(pow(zeta(K, 5), 5) == NFElem(K, K->one()));
  auto K3 = cyclotomic(3);
  CHECK(pow(zeta(K3, 6), 3) == NFElem(K3, K3->from_int(-1)));
}

TEST_CASE("norms") {
  auto K = p2_field();
  NFElem theta(K, K->gen());
  // companion matrix of t^3 + 12 t^2 - 64: columns theta^j
  std::vector<std::vector<Rational>> C = {{0, 0, 64}, {1, 0, 0}, {0, 1, -12}};
  CHECK(nf_norm(theta).value.q() == det3(C));
  CHECK(nf_norm(theta).value.q() == 64);
  CHECK(nf_norm(NFElem(K, K->one())).value.q() == 1);
  auto L = p4_field();
  NFElem a0(L, L->gen());
  CHECK(L->base()->is_one(nf_norm(a0).value));
}

TEST_CASE("roots_in_field") {
  auto Qi = nf_create(q_poly({1, 0, 1}), Field::rationals());
  auto r = roots_in_field(q_poly({1, 0, 1}), Qi);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == -r[1]);
  CHECK(roots_in_field(q_poly({-64, 0, 12, 1}), p2_field()).size() == 3);
  CHECK(roots_in_field(q_poly({-2, 0, 1}), Field::rationals()).empty());
  CHECK(roots_in_field(q_poly({3, -4, 2, 1, 1}), p3_field()).size() == 4);
  CHECK_THROWS_AS(roots_in_field(q_poly({1, 2, 1}), Qi), Error);
  // polynomial with coefficients in the field itself
  auto K = p2_field();
  PolyRing R(*K);
  Poly g = R.mul(Poly{K->neg(K->gen()), K->one()}, Poly{K->from_int(5), K->one()});
  auto rr = roots_in_field(UPoly(K, g), K);
  CHECK(rr.size() == 2);
}

TEST_CASE("certify_cyclic") {
  auto G2 = certify_cyclic(p2_field());
  CHECK(G2.order == 3);
  auto G3 = certify_cyclic(p3_field());
  CHECK(G3.order == 4);
  auto G4 = certify_cyclic(p4_field());
  CHECK(G4.order == 5);
  try {
    certify_cyclic(nf_create(q_poly({-2, 0, 0, 1}), Field::rationals()));
    FAIL("t^3 - 2 certified");
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "not Galois");
    CHECK(e.witness()["root_count"] == 1);
  }
  // Q(sqrt2, sqrt3) is Galois but not cyclic: x^4 - 10 x^2 + 1
  try {
    certify_cyclic(nf_create(q_poly({1, 0, -10, 0, 1}), Field::rationals()));
    FAIL("biquadratic certified cyclic");
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "not cyclic");
  }
  for (const auto* G : {&G2, &G3, &G4}) {
    const Field& L = *G->top;
    Elem theta = L.gen();
    for (int i = 1; i < G->order; ++i) CHECK_FALSE(L.eq(G->apply_power(theta, i), theta));
    CHECK(L.eq(G->apply_power(theta, G->order), theta));
    auto back = CyclicGaloisDatum::from_json(G->to_json());
    CHECK(back.order == G->order);
  }
}

TEST_CASE("relative norms") {
  auto K = p2_field();
  auto G = certify_cyclic(K);
  const int m = 2;
  NFElem a0(K, K->gen());
  NFElem alpha = a0 * pow(NFElem(K, K->from_int(8)), m);
  NFElem lambda0(K, K->from_int(64));
  NFElem n = relative_norm(alpha / lambda0, G);
  CHECK(n.value.q() == 64);
  const int d = 9 * m - 12;
  CHECK(n.value.q() == Rational(Integer(1) << d));
  CHECK(relative_norm(NFElem(K, K->from_int(5)), G).value.q() == 125);

  auto L = p4_field();
  auto G4 = certify_cyclic(L);
  NFElem b = relative_norm(NFElem(L, L->gen()), G4);
  CHECK(b.field->is_one(b.value));
}

TEST_CASE("norm multiplicativity and agreement") {
  std::mt19937_64 rng(1234);
  std::vector<FieldPtr> fields = {p2_field(), p3_field(), cyclotomic(5),
                                  nf_create(q_poly({1, 0, 1}), Field::rationals())};
  for (const auto& K : fields) {
    auto G = certify_cyclic(K);
    for (int i = 0; i < 125; ++i) {
      NFElem x(K, K->random_elem(rng, 6)), y(K, K->random_elem(rng, 6));
      CHECK(nf_norm(x * y) == nf_norm(x) * nf_norm(y));
      if (i % 5 == 0) CHECK(relative_norm(x, G) == nf_norm(x));
    }
  }
}

TEST_CASE("torsion roots of unity") {
  CHECK(torsion_roots_of_unity(Field::rationals()) == std::vector<unsigned>{1, 2});
  auto Qi = nf_create(q_poly({1, 0, 1}), Field::rationals());
  CHECK(torsion_roots_of_unity(Qi) == std::vector<unsigned>{1, 2, 4});
  CHECK(torsion_roots_of_unity(p2_field()) == std::vector<unsigned>{1, 2});
  CHECK(torsion_roots_of_unity(p3_field()) == std::vector<unsigned>{1, 2});
  CHECK(torsion_roots_of_unity(cyclotomic(5)) == std::vector<unsigned>{1, 2, 5, 10});
  CHECK(torsion_roots_of_unity(p4_field()) == std::vector<unsigned>{1, 2, 5, 10});
}

TEST_CASE("degree-one places are ring maps") {
  auto L = p4_field();
  auto places = degree_one_places(L, 2, 3);
  REQUIRE(places.size() == 2);
  std::mt19937_64 rng(5);
  for (const auto& pl : places) {
    CHECK(pl.p % 10 == 1);
    for (int i = 0; i < 20; ++i) {
      Elem x = L->random_elem(rng, 5), y = L->random_elem(rng, 5);
      const Zp Z(pl.p);
      CHECK(*pl.reduce(L->mul(x, y)) == Z.mul(*pl.reduce(x), *pl.reduce(y)));
      CHECK(*pl.reduce(L->add(x, y)) == Z.add(*pl.reduce(x), *pl.reduce(y)));
    }
  }
}
