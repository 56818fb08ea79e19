#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "twistforge/descent.hpp"
#include "twistforge/twistgen.hpp"

using namespace twistforge;

namespace {

FieldPtr Q() { return Field::rationals(); }

MPoly mono(const FieldPtr& F, const Exponent& e, long long c = 1) { return MPoly::monomial(F, e, F->from_int(c)); }

HomForm fermat_cubic(const FieldPtr& k) { return HomForm::fermat(k, 2, 3); }

// F'(x) == r^-w F(D x) at random integer points, evaluated in the root field.
bool agrees_pointwise(const TwistModel& T, std::mt19937_64& rng, int trials = 6) {
  const FieldPtr& R = T.D.field();
  MPoly base = T.base.body().embed_into(R);
  MPoly twisted = T.twisted.body().embed_into(R);
  std::uniform_int_distribution<int> coef(-5, 5);
  const std::size_t N = T.D.size();
  Elem r = T.root_in_k ? R->neg(T.root_poly->coeffs[0]) : R->gen();
  Elem rw = R->inv(R->pow(r, T.weight));
  for (int t = 0; t < trials; ++t) {
    std::vector<Elem> x(N), Dx(N);
    for (std::size_t i = 0; i < N; ++i) {
      x[i] = R->from_int(coef(rng));
      Dx[i] = R->mul(T.D(i, i), x[i]);
    }
    if (!R->eq(twisted.eval(x), R->mul(rw, base.eval(Dx)))) return false;
  }
  return true;
}

ProjMatrix random_matrix(std::mt19937_64& rng, const FieldPtr& F, std::size_t size, bool invertible = true) {
  while (true) {
    Matrix m(size, std::vector<Elem>(size));
    for (auto& row : m)
      for (auto& x : row) x = F->random_elem(rng, 3);
    ProjMatrix M(F, m);
    if (!invertible || M.invertible()) return M;
  }
}

const Certificate* find_cert(const TwistModel& T, const std::string& kind) {
  for (const auto& c : T.certificates)
    if (c.kind == kind) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("diagonal automorphisms") {
  auto psi = DiagonalAutomorphism::make(3, {0, 1, 2});
  CHECK(psi.n() == 2);
  auto k = psi.field;
  CHECK(k->absolute_degree() == 2);
  auto p3 = psi.matrix().pow(3).scalar_value();
  REQUIRE(p3);
  CHECK(k->is_one(*p3));
  CHECK_FALSE(psi.matrix().pgl_equal(ProjMatrix::identity(k, 3)));
  CHECK(psi.power(2).pgl_equal(psi.matrix().pow(2)));
  CHECK_THROWS_AS(DiagonalAutomorphism::make(4, {0, 2, 2}), DomainError);
  CHECK_THROWS_AS(DiagonalAutomorphism::make(3, {1, 1, 2}), DomainError);
  auto back = DiagonalAutomorphism::from_json(psi.to_json());
  CHECK(back.a == psi.a);
  CHECK(back.m == 3);
  CHECK_THROWS_AS(DiagonalAutomorphism::from_json(json{{"m", 3}, {"a", {0, "x"}}}), ParseError);
  // exponents reduced mod m
  CHECK(DiagonalAutomorphism::make(3, {0, -1, 4}).a == std::vector<int>{0, 2, 1});
}

TEST_CASE("form weight") {
  auto k4 = cyclotomic(4);
  auto psi = DiagonalAutomorphism::make(4, {0, 0, 1});
  MPoly f = mono(k4, {5, 0, 0}) + mono(k4, {0, 5, 0}) + mono(k4, {1, 0, 4});
  CHECK(form_weight(HomForm(2, 5, f), psi) == 0);
  MPoly g = mono(k4, {0, 0, 5}) + mono(k4, {4, 0, 1});
  CHECK(form_weight(HomForm(2, 5, g), psi) == 1);
  auto k3 = cyclotomic(3);
  auto psi3 = DiagonalAutomorphism::make(3, {0, 0, 1});
  MPoly h = mono(k3, {3, 0, 0}) + mono(k3, {0, 3, 0}) + mono(k3, {1, 1, 1});
  try {
    form_weight(HomForm(2, 3, h), psi3);
    FAIL("expected an Error");
  } catch (const Error& e) {
    CHECK(e.witness()["monomials"].size() == 2);
    CHECK(e.witness()["weights"] == json::array({0, 1}));
  }
}

TEST_CASE("diagonal twist of the Fermat cubic") {
  std::mt19937_64 rng(11);
  auto psi = DiagonalAutomorphism::make(3, {0, 1, 2});
  auto k = psi.field;
  auto F = fermat_cubic(k);

  auto T = diagonal_twist(F, psi, NFElem::rational(k, 2));
  CHECK(T.all_passed());
  CHECK_FALSE(T.root_in_k);
  CHECK(T.weight == 0);
  CHECK(T.root_poly->degree() == 3);
  MPoly expect = mono(k, {3, 0, 0}) + mono(k, {0, 3, 0}, 2) + mono(k, {0, 0, 3}, 4);
  CHECK(T.twisted.body() == expect);
  CHECK(T.normalized == T.twisted);
  CHECK(agrees_pointwise(T, rng));
  REQUIRE(find_cert(T, "smoothness-transfer"));
  CHECK(find_cert(T, "smoothness-transfer")->status == Status::pass);
  CHECK(T.smooth_twisted->smooth);

  // sigma(D) D^-1 = psi in PGL for sigma(r) = zeta r
  const FieldPtr& R = T.D.field();
  auto G = make_cyclic_datum(R, R->mul(R->embed(psi.zeta), R->gen()));
  CHECK((galois_apply(T.D, G) * T.D.inverse()).pgl_equal(psi.matrix().embed_into(R)));

  // b = 1 and b = 8 give models with entries in k
  auto T1 = diagonal_twist(F, psi, NFElem::rational(k, 1), false);
  CHECK(T1.root_in_k);
  CHECK(T1.twisted == F);
  auto T8 = diagonal_twist(F, psi, NFElem::rational(k, 8), false);
  CHECK(T8.root_in_k);
  CHECK(k->eq(T8.twisted.body().coeff({0, 0, 3}), k->from_int(64)));
  REQUIRE(find_cert(T8, "kummer-trivial"));
  CHECK(agrees_pointwise(T8, rng));

  CHECK_THROWS_AS(diagonal_twist(F, psi, NFElem::rational(k, 0)), DomainError);
  CHECK_THROWS_AS(diagonal_twist(HomForm::fermat(cyclotomic(5), 2, 3), psi, NFElem::rational(k, 2)), DomainError);
}

TEST_CASE("diagonal twist over Q(i)") {
  std::mt19937_64 rng(12);
  auto k = cyclotomic(4);
  auto psi = DiagonalAutomorphism::make(4, {0, 0, 1});
  MPoly f = mono(k, {5, 0, 0}) + mono(k, {0, 5, 0}) + mono(k, {1, 0, 4});
  HomForm F(2, 5, f);
  auto T = diagonal_twist(F, psi, NFElem::rational(k, 2));
  CHECK(T.all_passed());
  MPoly expect = mono(k, {5, 0, 0}) + mono(k, {0, 5, 0}) + mono(k, {1, 0, 4}, 2);
  CHECK(T.twisted.body() == expect);
  CHECK(agrees_pointwise(T, rng));
  CHECK(find_cert(T, "smoothness-transfer")->status != Status::fail);

  // b = -4 = (1+i)^4 is a fourth power in Q(i)
  auto T4 = diagonal_twist(F, psi, NFElem::rational(k, -4), false);
  CHECK(T4.root_in_k);
  CHECK(agrees_pointwise(T4, rng));

  // weight 1
  MPoly g = mono(k, {0, 0, 5}) + mono(k, {4, 0, 1}) + mono(k, {0, 4, 1}, 3);
  auto Tg = diagonal_twist(HomForm(2, 5, g), psi, NFElem::rational(k, 3), false);
  CHECK(Tg.weight == 1);
  CHECK(Tg.all_passed());
  CHECK(agrees_pointwise(Tg, rng));
  // X2^5 -> 3 X2^5, X0^4 X2 -> X0^4 X2
  CHECK(k->eq(Tg.twisted.body().coeff({0, 0, 5}), k->from_int(3)));
  CHECK(k->eq(Tg.twisted.body().coeff({4, 0, 1}), k->one()));
}

TEST_CASE("Kummer isomorphism") {
  auto psi = DiagonalAutomorphism::make(3, {0, 1, 2});
  auto k = psi.field;
  auto F = fermat_cubic(k);
  auto A = diagonal_twist(F, psi, NFElem::rational(k, 2), false);
  auto B = diagonal_twist(F, psi, NFElem::rational(k, 16), false);
  auto C = diagonal_twist(F, psi, NFElem::rational(k, 3), false);
  auto E = kummer_isomorphism(A, B);
  REQUIRE(E);
  // u = 2 or a conjugate
  CHECK(E->field()->same_as(*k));
  auto S = substitute(A.twisted, *E);
  CHECK(S.scaled(k->inv(S.body().terms().rbegin()->second)) == B.normalized);
  CHECK_FALSE(kummer_isomorphism(A, C));
  CHECK(kummer_isomorphism(A, A));
}

TEST_CASE("reduce P to M D round trips") {
  std::mt19937_64 rng(21);
  SUBCASE("m = 3") {
    auto k = cyclotomic(3);
    auto L = nf_create(UPoly(k, {k->from_int(-2), k->zero(), k->zero(), k->one()}), k, "", "r");
    auto zeta = twistforge::zeta(k, 3).value;
    auto G = make_cyclic_datum(L, L->mul(L->embed(zeta), L->gen()));
    auto psi = DiagonalAutomorphism::make(3, {0, 1, 2}, k);
    Elem r = L->gen();
    auto D0 = ProjMatrix::diagonal(L, {L->one(), r, L->mul(r, r)});
    for (int t = 0; t < 10; ++t) {
      auto M0 = random_matrix(rng, k, 3);
      Elem c = L->zero();
      while (L->is_zero(c)) c = L->random_elem(rng, 3);
      ProjMatrix P = (M0.embed_into(L) * D0).scaled(c);
      auto red = reduce_P_to_MD(P, psi, G);
      CHECK(red.certificate.passed());
      CHECK(red.psi_powers == std::vector<int>{1, 2});
      CHECK((red.M.embed_into(L) * red.D).pgl_equal(P));
      CHECK(red.D.is_diagonal());
      // M differs from M0 by a diagonal matrix over k
      CHECK((M0.inverse() * red.M).is_diagonal());
    }
    auto bad = random_matrix(rng, L, 3);
    try {
      reduce_P_to_MD(bad, psi, G);
      FAIL("expected an Error");
    } catch (const Error& e) {
      CHECK(e.witness()["sigma_power"] == 1);
    }
  }
  SUBCASE("m = 4") {
    auto k = cyclotomic(4);
    auto L = nf_create(UPoly(k, {k->from_int(-3), k->zero(), k->zero(), k->zero(), k->one()}), k, "", "r");
    auto G = make_cyclic_datum(L, L->mul(L->embed(k->gen()), L->gen()));
    auto psi = DiagonalAutomorphism::make(4, {0, 1, 3}, k);
    Elem r = L->gen();
    auto D0 = ProjMatrix::diagonal(L, {L->one(), r, L->pow(r, 3)});
    auto M0 = random_matrix(rng, k, 3);
    auto red = reduce_P_to_MD(M0.embed_into(L) * D0, psi, G);
    CHECK(red.certificate.passed());
    CHECK(red.psi_powers.size() == 3);
  }
}

TEST_CASE("twist model from a matrix") {
  auto F = HomForm::fermat(Q(), 2, 4);
  auto L = nf_create(UPoly::over_q(std::vector<long long>{-2, 0, 0, 0, 1}), Q(), "", "s");
  auto M = ProjMatrix::diagonal(L, {L->one(), L->one(), L->gen()});
  auto T = twist_model_from_matrix(F, M);
  MPoly expect = mono(Q(), {4, 0, 0}) + mono(Q(), {0, 4, 0}) + mono(Q(), {0, 0, 4}, 2);
  CHECK(T.twisted.body() == expect);
  CHECK(T.all_passed());

  MPoly g = F.body() + mono(Q(), {1, 0, 3});
  CHECK_THROWS_AS(twist_model_from_matrix(HomForm(2, 4, g), M), Error);

  auto k = cyclotomic(3);
  auto L3 = nf_create(UPoly(k, {k->from_int(-2), k->zero(), k->zero(), k->one()}), k, "", "r");
  auto G = make_cyclic_datum(L3, L3->mul(L3->embed(twistforge::zeta(k, 3).value), L3->gen()));
  auto psi = DiagonalAutomorphism::make(3, {0, 1, 2}, k);
  auto D0 = ProjMatrix::diagonal(L3, {L3->one(), L3->gen(), L3->pow(L3->gen(), 2)});
  auto T3 = twist_model_from_matrix(fermat_cubic(k), D0, G, {psi.power(2), psi.matrix()});
  CHECK(T3.all_passed());
  CHECK(T3.certificates.back().witness["index"] == 1);
  auto T3b = twist_model_from_matrix(fermat_cubic(k), D0, G);
  CHECK(T3b.certificates.back().passed());
  auto T3c = twist_model_from_matrix(fermat_cubic(k), D0, G, {psi.power(2)});
  CHECK_FALSE(T3c.all_passed());
}

TEST_CASE("splitting conditions") {
  auto a = splitting_conditions(3, 2, "number-field");
  CHECK(a["verdict"] == "inconclusive");
  CHECK(a["gcd"]["value"] == 3);
  CHECK(splitting_conditions(4, 2, "number-field")["verdict"] == "always a smooth hypersurface over k");
  CHECK(splitting_conditions(3, 2, "finite")["brauer"]["met"] == true);
  CHECK(splitting_conditions(3, 2, "real")["brauer"]["met"] == true);
  CHECK(splitting_conditions(4, 3, "real")["verdict"] == "inconclusive");
  auto rp = splitting_conditions(3, 2, "other", true);
  CHECK(rp["verdict"] == "always a smooth hypersurface over k");
  CHECK(rp["conditions_met"] == json::array({"rational-point"}));
  CHECK(splitting_conditions(3, 2, "other", false)["verdict"] == "inconclusive");
  CHECK_THROWS_AS(splitting_conditions(3, 2, "p-adic"), ParseError);
}
