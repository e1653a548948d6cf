#include <catch2/catch_amalgamated.hpp>

#include "modlat/module_lattice.hpp"

using namespace modlat;

TEST_CASE("column HNF basics") {
  MatZ a(2, 2);
  a(0, 0) = 2; a(0, 1) = 1;
  a(1, 0) = 0; a(1, 1) = 1;
  auto h = col_hnf(a);
  REQUIRE(h.h.cols() == 2);
  // lattice spanned by (2,0),(1,1) is {(x,y): x+y even}? det = 2.
  mpz_class det = h.h(0, 0) * h.h(1, 1);
  REQUIRE(det == 2);
  // HNF canonical: pivots positive, reduced off-diagonal.
  REQUIRE(h.h(0, 0) > 0);
  REQUIRE(h.h(1, 1) > 0);
  REQUIRE(h.h(1, 0) == 0);
  REQUIRE(h.h(0, 1) >= 0);
  REQUIRE(h.h(0, 1) < h.h(0, 0));
}

TEST_CASE("HNF representation independence") {
  Rng rng(7);
  for (int t = 0; t < 30; ++t) {
    MatZ a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = static_cast<long>(rng.below(21)) - 10;
    MatQ aq = to_matq(a);
    if (det_q(aq) == 0) continue;
    // Random unimodular transform.
    MatZ u = MatZ::identity(3);
    for (int k = 0; k < 6; ++k) {
      size_t i = rng.below(3), j = rng.below(3);
      if (i == j) continue;
      long c = static_cast<long>(rng.below(7)) - 3;
      for (int rr = 0; rr < 3; ++rr) u(rr, i) = u(rr, i) + c * u(rr, j);
    }
    MatZ b(3, 3, mpz_class(0));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) b(i, j) += a(i, k) * u(k, j);
    auto ha = col_hnf(a), hb = col_hnf(b);
    REQUIRE(ha.h == hb.h);
  }
}

TEST_CASE("HNF transform and solve") {
  MatZ a(2, 3);
  a(0, 0) = 4; a(0, 1) = 6; a(0, 2) = 1;
  a(1, 0) = 2; a(1, 1) = 0; a(1, 2) = 3;
  auto h = col_hnf(a, true);
  // a * u = [h | 0]
  for (size_t c = 0; c < 3; ++c) {
    for (size_t i = 0; i < 2; ++i) {
      mpz_class s = 0;
      for (size_t k = 0; k < 3; ++k) s += a(i, k) * h.u(k, c);
      mpz_class expect = c < h.h.cols() ? h.h(i, c) : mpz_class(0);
      REQUIRE(s == expect);
    }
  }
  auto sol = solve_z(a, {mpz_class(5), mpz_class(1)});
  REQUIRE(sol.has_value());
  mpz_class r0 = 4 * (*sol)[0] + 6 * (*sol)[1] + (*sol)[2];
  mpz_class r1 = 2 * (*sol)[0] + 3 * (*sol)[2];
  REQUIRE(r0 == 5);
  REQUIRE(r1 == 1);
}

TEST_CASE("integer kernel") {
  MatZ a(1, 3);
  a(0, 0) = 2; a(0, 1) = 4; a(0, 2) = 6;
  MatZ k = integer_kernel(a);
  REQUIRE(k.cols() == 2);
  for (size_t c = 0; c < 2; ++c) {
    mpz_class s = 2 * k(0, c) + 4 * k(1, c) + 6 * k(2, c);
    REQUIRE(s == 0);
  }
}

TEST_CASE("rational inverse and det") {
  MatQ a(2, 2);
  a(0, 0) = 1; a(0, 1) = 2;
  a(1, 0) = 3; a(1, 1) = 4;
  REQUIRE(det_q(a) == -2);
  MatQ inv = inverse_q(a);
  MatQ prod = a * inv;
  REQUIRE(prod == MatQ::identity(2));
}

TEST_CASE("real op norm") {
  MatR a(2, 2, Real(0));
  a(0, 0) = 3; a(1, 1) = 4;
  REQUIRE(abs(op_norm(a) - 4) < 1e-20);
}
