#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "roughjump/lift.hpp"
#include "roughjump/numeric.hpp"
#include "roughjump/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace roughjump;

TEST_CASE("level k is the k-th increment power over k factorial") {
  RngStream rng(41, 0);
  const auto X = fixtures::shared(fixtures::random_jumpy(rng, 10, 2, 0.3));
  const ReducedRoughPath lift(X, 3.5);
  REQUIRE(lift.level_count() == 3);
  for (int trial = 0; trial < 15; ++trial) {
    int i = int(rng.next_u32() % 11), j = int(rng.next_u32() % 11);
    if (i > j) std::swap(i, j);
    const Vector dx = X->increment(i, j);
    for (int k = 1; k <= 3; ++k) {
      const SymTensor got = lift.level(k, i, j);
      const DenseTensor want = oracle::rank1(dx, k);
      for (std::size_t q = 0; q < got.size(); ++q)
        CHECK(got[q] == doctest::Approx(want[q] / factorial(k)).epsilon(1e-13));
    }
  }
}

TEST_CASE("level count equals floor(p), including integer p") {
  const auto X = fixtures::shared(fixtures::updown());
  CHECK(ReducedRoughPath(X, 1.0).level_count() == 1);
  CHECK(ReducedRoughPath(X, 1.9).level_count() == 1);
  CHECK(ReducedRoughPath(X, 2.0).level_count() == 2);
  CHECK(ReducedRoughPath(X, 5.5).level_count() == 5);
  CHECK_THROWS_AS(ReducedRoughPath(X, 0.9), std::invalid_argument);
  // floor(p) beyond the tensor level cap is not representable.
  CHECK_THROWS_AS(ReducedRoughPath(X, 7.2), std::length_error);
}

TEST_CASE("reduced Chen relation verified against the oracle symmetrization") {
  RngStream rng(42, 0);
  const auto X = fixtures::shared(fixtures::random_jumpy(rng, 12, 2, 0.4));
  const ReducedRoughPath lift(X, 3.5);
  const int n = lift.level_count();
  for (int trial = 0; trial < 10; ++trial) {
    int a = int(rng.next_u32() % 13), b = int(rng.next_u32() % 13),
        c = int(rng.next_u32() % 13);
    const int i = std::min({a, b, c}), j = std::max({a, b, c});
    const int u = a + b + c - i - j;
    for (int k = 1; k <= n; ++k) {
      // Oracle side: Sym(sum_m X^{k-m}(i,u) ox X^m(u,j)), powers built densely.
      DenseTensor acc(k, X->dim());
      const Vector du = X->increment(i, u);
      const Vector dv = X->increment(u, j);
      for (int m = 0; m <= k; ++m) {
        DenseTensor term = (m == 0) ? oracle::rank1(du, k)
                           : (m == k)
                               ? oracle::rank1(dv, k)
                               : tensor_product(oracle::rank1(du, k - m),
                                                oracle::rank1(dv, m));
        term *= 1.0 / (factorial(k - m) * factorial(m));
        acc += term;
      }
      const DenseTensor want = oracle::symmetrize(acc);
      const SymTensor got = lift.level(k, i, j);
      for (std::size_t q = 0; q < got.size(); ++q)
        CHECK(got[q] == doctest::Approx(want[q]).epsilon(1e-12));
    }
  }
}

TEST_CASE("chen_check reports tiny defects on canonical lifts") {
  RngStream rng(43, 0);
  const auto X = fixtures::shared(fixtures::random_jumpy(rng, 20, 3, 0.3));
  const ReducedRoughPath lift(X, 4.5);
  for (int trial = 0; trial < 50; ++trial) {
    int a = int(rng.next_u32() % 21), b = int(rng.next_u32() % 21),
        c = int(rng.next_u32() % 21);
    const int i = std::min({a, b, c}), j = std::max({a, b, c});
    const int u = a + b + c - i - j;
    const ChenReport r = chen_check(lift, i, u, j);
    CHECK(r.pass);
    REQUIRE(r.defects.size() == 4);
    for (std::size_t k = 0; k < r.defects.size(); ++k)
      CHECK(r.defects[k] <= 1e-12 * (1.0 + r.scales[k]));
  }
}

TEST_CASE("level norm is bounded by the control to the power k/p over k!") {
  RngStream rng(44, 0);
  const auto X = fixtures::shared(fixtures::random_jumpy(rng, 24, 2, 0.35));
  const double p = 2.5;
  const ReducedRoughPath lift(X, p);
  const ControlFunction c(X, p);
  for (int i = 0; i <= 24; ++i)
    for (int j = i; j <= 24; ++j)
      for (int k = 1; k <= lift.level_count(); ++k) {
        const double lhs = lift.level(k, i, j).norm();
        const double rhs = std::pow(c(i, j), double(k) / p) / factorial(k);
        CHECK(lhs <= rhs * (1 + 1e-12) + 1e-15);
      }
}

TEST_CASE("controlled path levels are the shifted derivatives of F") {
  RngStream rng(45, 0);
  const auto X = fixtures::shared(fixtures::random_jumpy(rng, 8, 2, 0.3));
  const SmoothFunction F = fixtures::random_polynomial(rng, 2, 4);
  const ReducedRoughPath lift(X, 3.2);
  const ControlledPath Y = controlled_from_function(F, lift);
  REQUIRE(Y.levels() == 3);
  for (int i = 0; i <= 8; ++i)
    for (int k = 0; k < 3; ++k) {
      const SymForm& got = Y.level(k, i);
      const SymForm want = F.derivative(k + 1, X->at(i));
      REQUIRE(got.order() == k + 1);
      for (std::size_t q = 0; q < got.size(); ++q)
        CHECK(got[q] == doctest::Approx(want[q]).epsilon(1e-14));
    }
}

TEST_CASE("remainder is the controlled Taylor defect, exact for polynomials") {
  // For F of total degree <= n every remainder at level k is the Taylor tail
  // beyond order n - k, which vanishes when F is a polynomial of degree n
  // only for the top level; instead check the defining identity directly.
  RngStream rng(46, 0);
  const auto X = fixtures::shared(fixtures::random_jumpy(rng, 10, 1, 0.3));
  const SmoothFunction F = make_exp();
  const ReducedRoughPath lift(X, 3.5);
  const ControlledPath Y = controlled_from_function(F, lift);
  const int n = Y.levels();
  for (int trial = 0; trial < 20; ++trial) {
    int i = int(rng.next_u32() % 11), j = int(rng.next_u32() % 11);
    if (i > j) std::swap(i, j);
    for (int k = 0; k < n; ++k) {
      SymForm want = Y.level(k, j) - Y.level(k, i);
      for (int m = 1; m <= n - 1 - k; ++m)
        want -= contract_trailing(Y.level(k + m, i), lift.level(m, i, j));
      const SymForm got = Y.remainder(k, i, j);
      for (std::size_t q = 0; q < got.size(); ++q)
        CHECK(got[q] == doctest::Approx(want[q]).epsilon(1e-12));
    }
  }
}

TEST_CASE("remainder scales like the missing control power on smooth paths") {
  // On a continuous path with small oscillation the level-k remainder is
  // O(c^{(n-k)/p}); verify the ratio stays bounded as the window shrinks.
  RngStream rng(47, 0);
  const auto X = fixtures::shared(fixtures::random_continuous(rng, 64, 1));
  const double p = 2.5;
  const ReducedRoughPath lift(X, p);
  const ControlledPath Y = controlled_from_function(make_exp(), lift);
  const ControlFunction c(X, p);
  const int n = Y.levels();
  for (int k = 0; k < n; ++k) {
    double worst = 0.0;
    for (int i = 0; i + 4 <= 64; i += 4) {
      const double cij = c(i, i + 4);
      if (cij == 0.0) continue;
      worst = std::max(
          worst, Y.remainder(k, i, i + 4).norm() /
                     std::pow(cij, double(n - k) / p));
    }
    INFO("level ", k, " worst ratio ", worst);
    CHECK(worst < 50.0);
  }
}

TEST_CASE("controlled_from_function guards") {
  const auto X = fixtures::shared(fixtures::updown());
  // Needs derivatives up to floor(p)+1, one past the tensor level cap here.
  const ReducedRoughPath at_cap(X, 6.5);
  CHECK_THROWS_AS(controlled_from_function(make_exp(), at_cap),
                  std::invalid_argument);
  // Path hull [0, 1] leaves the declared domain box.
  const ReducedRoughPath l2(X, 2.5);
  CHECK_THROWS_AS(controlled_from_function(make_log_clamped(0.5, 0.9), l2),
                  std::domain_error);
}
