#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "twistforge/arith_certs.hpp"

using namespace twistforge;

namespace {

UPoly q_poly(const std::vector<long long>& c) { return UPoly::over_q(c); }
FieldPtr p2_field() { return nf_create(q_poly({-64, 0, 12, 1}), Field::rationals(), "", "a"); }
FieldPtr p3_field() { return nf_create(q_poly({3, -4, 2, 1, 1}), Field::rationals(), "", "a"); }

}  // namespace

TEST_CASE("Dedekind criterion") {
  auto r = dedekind_p_maximal(q_poly({-5, 0, 1}), 2);
  CHECK_FALSE(r.p_maximal);
  CHECK(r.witness == NmodPoly{1, 1});
  CHECK(dedekind_p_maximal(q_poly({1, 0, 1}), 3).p_maximal);
  CHECK(dedekind_p_maximal(q_poly({-64, 0, 12, 1}), 5).p_maximal);
  // theta = 2 i: Z[2i] has index 2
  CHECK_FALSE(dedekind_p_maximal(q_poly({4, 0, 1}), 2).p_maximal);
  CHECK(dedekind_p_maximal(q_poly({4, 0, 1}), 3).p_maximal);
  CHECK_THROWS(dedekind_p_maximal(q_poly({1, 0, 2}), 2));
  CHECK_THROWS(dedekind_p_maximal(UPoly::over_q(std::vector<Rational>{Rational(1, 2), 0, 1}), 2));
}

TEST_CASE("split_prime examples") {
  auto K2 = p2_field();
  auto c2 = split_prime(K2, 2);
  CHECK(c2.residue_degrees == std::vector<int>{3});
  CHECK(c2.ramification == std::vector<int>{1});
  // The found generator's polynomial mod 2 has no root in F_2, degree 3: irreducible.
  const Zp F2(2);
  std::vector<Integer> z;
  for (const auto& c : c2.minpoly.coeffs) z.push_back(c.q().get_num());
  NmodPoly m2 = nmod::from_integers(F2, z);
  CHECK(nmod::degree(m2) == 3);
  CHECK(nmod::eval(F2, m2, 0) != 0);
  CHECK(nmod::eval(F2, m2, 1) != 0);

  auto Qi = nf_create(q_poly({1, 0, 1}), Field::rationals());
  auto c5 = split_prime(Qi, 5);
  CHECK(c5.residue_degrees == std::vector<int>{1, 1});

  auto K3 = p3_field();
  auto c17 = split_prime(K3, 17);
  CHECK(c17.residue_degrees == std::vector<int>{2, 2});
  CHECK(c17.unramified());
  auto gamma = find_element_of_norm(K3, 289, 3);
  REQUIRE(gamma.element);
  CHECK(abs(gamma.norm) == 289);
  CHECK_FALSE(K3->in_base(*gamma.element));
}

TEST_CASE("split_prime withholds certificates") {
  // Dedekind's cubic: 2 is a common index divisor.
  auto K = nf_create(q_poly({8, -2, 1, 1}), Field::rationals());
  CHECK_THROWS_AS(split_prime(K, 2), SearchExhausted);
  CHECK_THROWS(split_prime_with(K, 2, K->gen()));
}

TEST_CASE("local norms and obstructions") {
  auto K2 = p2_field();
  auto G2 = certify_cyclic(K2);
  auto c2 = split_prime(K2, 2);
  CHECK_FALSE(local_norm_unramified(2, c2, G2));
  CHECK(local_norm_unramified(8, c2, G2));
  auto K3 = p3_field();
  auto G3 = certify_cyclic(K3);
  auto c17 = split_prime(K3, 17);
  CHECK_FALSE(local_norm_unramified(17, c17, G3));

  auto ob2 = non_norm_certificate(2, G2);
  CHECK(ob2.p == 2);
  CHECK(ob2.residue_degree == 3);
  CHECK(ob2.valuation == 1);
  auto ob17 = non_norm_certificate(17, G3);
  CHECK(ob17.p == 17);
  CHECK_THROWS_WITH(non_norm_certificate(1, G2), "no obstruction found among candidate primes");
  // ramified prime refused
  auto c3 = split_prime(K3, 13);
  CHECK_FALSE(c3.unramified());
  CHECK_THROWS(local_norm_unramified(13, c3, G3));
}

TEST_CASE("split certificate properties") {
  std::mt19937_64 rng(77);
  std::vector<FieldPtr> fields = {p2_field(), p3_field(), cyclotomic(5), cyclotomic(7)};
  for (const auto& K : fields) {
    auto G = certify_cyclic(K);
    for (std::uint64_t p : {3ULL, 5ULL, 11ULL, 29ULL, 31ULL, 43ULL}) {
      PrimeSplitCertificate cert;
      try {
        cert = split_prime(K, p);
      } catch (const SearchExhausted&) {
        continue;
      }
      int total = 0;
      for (std::size_t i = 0; i < cert.residue_degrees.size(); ++i) {
        total += cert.residue_degrees[i] * cert.ramification[i];
        CHECK(cert.residue_degrees[i] == cert.residue_degrees[0]);
        CHECK(cert.ramification[i] == cert.ramification[0]);
      }
      CHECK(total == K->degree());
      if (cert.unramified() && cert.residue_degree() == 1) {
        std::uniform_int_distribution<int> e(-5, 5);
        for (int i = 0; i < 10; ++i) {
          Rational beta = 1;
          int v = e(rng);
          for (int k = 0; k < std::abs(v); ++k) beta = v > 0 ? Rational(beta * Rational(p)) : Rational(beta / Rational(p));
          beta *= 7;
          CHECK(local_norm_unramified(beta, cert, G));
        }
      }
      // Another accepted generator gives the same residue degree multiset.
      for (long c = 1; c <= 6; ++c) {
        Elem g = K->add(K->mul(K->from_int(c), cert.generator), K->from_int(c + 1));
        try {
          auto other = split_prime_with(K, p, g);
          auto a = other.residue_degrees, b = cert.residue_degrees;
          std::sort(a.begin(), a.end());
          std::sort(b.begin(), b.end());
          CHECK(a == b);
        } catch (const Error&) {
        }
      }
    }
  }
}
