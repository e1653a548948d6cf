#include <catch2/catch_amalgamated.hpp>

#include "modlat/numfield.hpp"

using namespace modlat;

TEST_CASE("built-in field invariants") {
  auto Qi = fields::gaussian();
  CHECK(Qi->d == 2);
  CHECK(Qi->disc == -4);
  CHECK(Qi->r1 == 0);
  CHECK(Qi->r2 == 1);

  auto rt5 = fields::root5();
  CHECK(rt5->disc == 5);
  CHECK(rt5->r1 == 2);
  CHECK(rt5->index == 2);

  auto Q = fields::rationals();
  CHECK(Q->d == 1);
  CHECK(Q->disc == 1);
  CHECK(Q->r1 == 1);

  auto z5 = fields::zeta5();
  CHECK(z5->disc == 125);
  CHECK(z5->r2 == 2);
}

TEST_CASE("reducible polynomial rejected") {
  // x^2 - 1 = (x-1)(x+1)
  CHECK_THROWS_AS(field_new(fields::make_poly({-1, 0, 1}), MatQ::identity(2)),
                  ReducibleDefiningPolynomial);
  // x^4 + 4 = (x^2-2x+2)(x^2+2x+2), no rational roots
  CHECK_THROWS_AS(field_new(fields::make_poly({4, 0, 0, 0, 1}), MatQ::identity(4)),
                  ReducibleDefiningPolynomial);
  // x^2 + 1 fine
  CHECK_NOTHROW(field_new(fields::make_poly({1, 0, 1}), MatQ::identity(2)));
}

TEST_CASE("element arithmetic") {
  auto Qi = fields::gaussian();
  FieldElem one_plus_i = Qi->elem({1, 1});
  FieldElem one_minus_i = Qi->elem({1, -1});
  FieldElem prod = Qi->mul(one_plus_i, one_minus_i);
  CHECK(prod == Qi->from_rational(2));

  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    FieldElem a = Qi->elem({mpq_class(static_cast<long>(rng.below(19)) - 9),
                            mpq_class(static_cast<long>(rng.below(19)) - 9)});
    CHECK(Qi->mul(a, Qi->one()) == a);
    if (!a.is_zero()) CHECK(Qi->mul(a, Qi->inverse(a)) == Qi->one());
  }

  auto rt5 = fields::root5();
  FieldElem b2 = rt5->elem({0, 1});
  FieldElem sq = rt5->mul(b2, b2);
  CHECK(sq == rt5->elem({1, 1}));  // b2^2 = 1 + b2
}

TEST_CASE("embeddings and canonical norm") {
  auto Qi = fields::gaussian();
  Real n1 = Qi->canonical_norm(Qi->one());
  CHECK(abs(n1 - sqrt(Real(2))) < 1e-30);
  Real ni = Qi->canonical_norm(Qi->elem({0, 1}));
  CHECK(abs(ni - sqrt(Real(2))) < 1e-30);

  auto Q = fields::rationals();
  CHECK(abs(Q->canonical_norm(Q->from_rational(3)) - 3) < 1e-30);

  // embed respects multiplication.
  auto rt5 = fields::root5();
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    FieldElem a = rt5->elem({mpq_class(static_cast<long>(rng.below(9)) - 4),
                             mpq_class(static_cast<long>(rng.below(9)) - 4)});
    FieldElem b = rt5->elem({mpq_class(static_cast<long>(rng.below(9)) - 4),
                             mpq_class(static_cast<long>(rng.below(9)) - 4)});
    KRElement ea = rt5->embed(a), eb = rt5->embed(b);
    KRElement eab = rt5->embed(rt5->mul(a, b));
    KRElement prod = ea * eb;
    for (int v = 0; v < rt5->r1; ++v) CHECK(abs(eab.re[v] - prod.re[v]) < 1e-30);
  }
}

TEST_CASE("exact gram via conjugation") {
  auto Qi = fields::gaussian();
  REQUIRE(Qi->has_exact_gram());
  FieldElem i = Qi->elem({0, 1});
  CHECK(Qi->inner_exact(Qi->one(), Qi->one()) == 2);  // Tr(1) over the metric
  CHECK(Qi->inner_exact(i, i) == 2);
  CHECK(Qi->inner_exact(Qi->one(), i) == 0);
}

TEST_CASE("ideals: gcd, canonical form, norms") {
  auto Q = fields::rationals();
  Ideal g = Q->ideal_from_gens({Q->from_rational(6), Q->from_rational(10)});
  CHECK(g.norm() == 2);
  CHECK(g.hnf(0, 0) == 2);
  CHECK(g.denom == 1);

  auto Qi = fields::gaussian();
  Ideal p2 = Qi->ideal_from_gens({Qi->elem({1, 1})});
  CHECK(p2.norm() == 2);

  Ideal unit = Qi->ideal_from_gens({Qi->one()});
  CHECK(unit.norm() == 1);
  CHECK(unit.hnf == MatZ::identity(2));

  // representation independence
  Ideal p2b = Qi->ideal_from_gens({Qi->elem({1, 1}), Qi->elem({2, 0}), Qi->elem({1, -1})});
  // (1+i), 2, (1-i) all generate... (1-i) = -i(1+i), so same ideal
  CHECK(p2 == p2b);
}

TEST_CASE("ideal multiplication and inverse") {
  auto Qi = fields::gaussian();
  Ideal p = Qi->ideal_from_gens({Qi->elem({1, 1})});
  Ideal p2 = Qi->ideal_mul(p, p);
  Ideal two = Qi->principal_ideal(Qi->from_rational(2));
  CHECK(p2 == two);

  Ideal unit = Qi->unit_ideal();
  CHECK(Qi->ideal_mul(p, unit) == p);

  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    FieldElem a = Qi->elem({mpq_class(static_cast<long>(rng.below(9)) + 1),
                            mpq_class(static_cast<long>(rng.below(9)))});
    FieldElem b = Qi->elem({mpq_class(static_cast<long>(rng.below(9))),
                            mpq_class(static_cast<long>(rng.below(9)) + 1)});
    Ideal A = Qi->ideal_from_gens({a});
    Ideal B = Qi->ideal_from_gens({b});
    CHECK(Qi->ideal_mul(A, B).norm() == A.norm() * B.norm());
    Ideal Ainv = Qi->ideal_inverse(A);
    CHECK(Qi->ideal_mul(A, Ainv) == unit);
  }
}

TEST_CASE("quotient representatives") {
  auto Qi = fields::gaussian();
  Ideal unit = Qi->unit_ideal();
  Ideal p = Qi->ideal_from_gens({Qi->elem({1, 1})});
  auto reps = Qi->quotient_reps(unit, p);
  CHECK(reps.size() == 2);
  Ideal five = Qi->ideal_from_gens({Qi->elem({2, 1})});
  CHECK(Qi->quotient_reps(unit, five).size() == 5);
}

TEST_CASE("primes_up_to") {
  auto Q = fields::rationals();
  auto ps = Q->primes_up_to(10);
  REQUIRE(ps.size() == 4);
  CHECK(ps[0].p == 2);
  CHECK(ps[3].p == 7);

  auto Qi = fields::gaussian();
  auto psi = Qi->primes_up_to(5);
  REQUIRE(psi.size() == 3);
  CHECK(psi[0].norm() == 2);
  CHECK(psi[1].norm() == 5);
  CHECK(psi[2].norm() == 5);
  // 3 is inert, norm 9 > 5, excluded.

  // trivial bound |P(B)| <= d*B
  for (double b : {5.0, 20.0, 50.0}) {
    auto v = Qi->primes_up_to(mpq_class(b));
    CHECK(v.size() <= 2 * static_cast<size_t>(b));
  }

  // rt5: index divisor p=2 handled by the quadratic rule (5 mod 8 -> inert).
  auto rt5 = fields::root5();
  auto f2 = rt5->factor_rational_prime(2);
  REQUIRE(f2.size() == 1);
  CHECK(f2[0].residue_degree == 2);
  auto f5 = rt5->factor_rational_prime(5);
  REQUIRE(f5.size() == 1);
  CHECK(f5[0].ramification == 2);
  auto f11 = rt5->factor_rational_prime(11);
  CHECK(f11.size() == 2);

  // zeta5: 2 has order 4 mod 5 -> inert; 11 = 1 mod 5 -> splits completely.
  auto z5 = fields::zeta5();
  CHECK(z5->factor_rational_prime(2).size() == 1);
  CHECK(z5->factor_rational_prime(11).size() == 4);
  CHECK(z5->factor_rational_prime(5).size() == 1);
  CHECK(z5->factor_rational_prime(5)[0].ramification == 4);
}

TEST_CASE("prime ideal contains p and has prime-power norm") {
  auto z5 = fields::zeta5();
  for (const auto& P : z5->primes_up_to(30)) {
    CHECK(z5->ideal_contains(P.ideal, z5->from_rational(mpq_class(P.p))));
    CHECK(P.ideal.norm() == P.norm());
  }
}

TEST_CASE("sample_prime uniform over two-element set") {
  auto Q = fields::rationals();
  Rng rng(42);
  int c2 = 0, n = 10000;
  for (int t = 0; t < n; ++t)
    if (sample_prime(*Q, 3, rng).p == 2) ++c2;
  // 3 sigma around n/2
  CHECK(std::abs(c2 - n / 2) < 3 * std::sqrt(n / 4.0));

  auto Qi = fields::gaussian();
  for (int t = 0; t < 20; ++t) CHECK(sample_prime(*Qi, 2, rng).norm() == 2);
}

TEST_CASE("size rules") {
  CHECK(bit_size(mpz_class(1)) == 1);
  CHECK(bit_size(mpz_class(0)) == 1);
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    mpz_class n = rng.random_bits(1 + rng.below(40)) + 1;
    CHECK(bit_size(mpz_class(2 * n)) == bit_size(n) + 1);
  }
  // size(a) <= d^2 size(N(a)) for integral ideals
  auto Qi = fields::gaussian();
  for (int t = 0; t < 20; ++t) {
    FieldElem g = Qi->elem({mpq_class(static_cast<long>(rng.below(50)) + 1),
                            mpq_class(static_cast<long>(rng.below(50)))});
    Ideal A = Qi->ideal_from_gens({g});
    mpq_class nq = A.norm();
    long lhs = A.size_bits();
    long rhs = 4 * (bit_size(nq.get_num()) + bit_size(nq.get_den()));
    CHECK(lhs <= rhs + 8);
  }
}
