#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "testutil.hpp"

#include <cmath>

#include "kmboot/rng.hpp"
#include "kmboot/step_function.hpp"

using kmboot::PiecewiseLinear;
using kmboot::RandomStream;
using kmboot::StepFunction;

namespace {

// Random step function with jumps on a coarse lattice so shared jump times
// across pairs are common.
StepFunction random_step(RandomStream& rng, std::size_t max_jumps) {
  const std::size_t k = 1 + rng.below(max_jumps);
  std::vector<double> bp;
  for (std::size_t i = 0; i < k; ++i)
    bp.push_back(0.125 * static_cast<double>(1 + rng.below(40)));
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  std::vector<double> vals;
  for (std::size_t i = 0; i < bp.size(); ++i) vals.push_back(rng.uniform(-2.0, 2.0));
  return StepFunction(rng.uniform(-2.0, 2.0), std::move(bp), std::move(vals));
}

}  // namespace

TEST_CASE("evaluation is right-continuous") {
  const StepFunction f(1.0, {1.0}, {2.0 / 3.0});
  CHECK(f(0.5) == 1.0);
  CHECK(f(1.0) == 2.0 / 3.0);
  CHECK(f(1.5) == 2.0 / 3.0);
}

TEST_CASE("left limits") {
  const StepFunction f(1.0, {1.0}, {2.0 / 3.0});
  CHECK(f.left_limit(1.0) == 1.0);
  CHECK(f.left_limit(0.5) == 1.0);
  const StepFunction g(1.0, {1.0, 3.0}, {2.0 / 3.0, 0.0});
  CHECK(g.left_limit(3.0) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(f.left_limit(0.0), std::invalid_argument);
}

TEST_CASE("constructor rejects bad breakpoints") {
  CHECK_THROWS_AS(StepFunction(1.0, {2.0, 1.0}, {0.5, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(StepFunction(1.0, {-1.0}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(StepFunction(1.0, {1.0}, {0.5, 0.2}), std::invalid_argument);
}

TEST_CASE("stieltjes integral over jumps") {
  // Survival curve of [(1,event),(2,censored),(3,event)]
  const StepFunction s_hat(1.0, {1.0, 3.0}, {2.0 / 3.0, 0.0});
  const StepFunction one(1.0);
  CHECK(stieltjes_integral(one, s_hat, 3.0) == doctest::Approx(-1.0).epsilon(1e-12));

  const StepFunction indicator(0.0, {3.0}, {1.0});
  CHECK(stieltjes_integral(indicator, s_hat, 3.0) ==
        doctest::Approx(-2.0 / 3.0).epsilon(1e-12));

  // constant integrand: c * (b(s) - b(0))
  const StepFunction c(2.5);
  CHECK(stieltjes_integral(c, s_hat, 2.0) ==
        doctest::Approx(2.5 * (s_hat(2.0) - 1.0)).epsilon(1e-12));
}

TEST_CASE("integration by parts identity on random jump pairs") {
  RandomStream rng(321);
  for (int trial = 0; trial < 1000; ++trial) {
    const StepFunction a = random_step(rng, 12);
    const StepFunction b = random_step(rng, 12);
    const double s = rng.uniform(0.0, 6.0);
    const double lhs = stieltjes_integral(a, b, s);
    const double rhs = a(s) * b(s) - a(0.0) * b(0.0) -
                       stieltjes_integral([&](double t) { return b.left_limit(t); }, a, s);
    CHECK(lhs == near(rhs, 1e-10));
  }
}

TEST_CASE("stieltjes integral is linear and interval-additive") {
  RandomStream rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const StepFunction a = random_step(rng, 8);
    const StepFunction a2 = random_step(rng, 8);
    const StepFunction b = random_step(rng, 8);
    const double s = rng.uniform(0.5, 6.0);
    const double lambda = rng.uniform(-3.0, 3.0);

    const double combo = stieltjes_integral(
        [&](double t) { return a(t) + lambda * a2(t); }, b, s);
    CHECK(combo == near(stieltjes_integral(a, b, s) +
                            lambda * stieltjes_integral(a2, b, s),
                        1e-10));

    // additivity over (0, mid] and (mid, s], the tail summed independently
    const double mid = rng.uniform(0.0, s);
    double tail = 0.0;
    for (std::size_t k = 0; k < b.jump_count(); ++k) {
      const double t = b.breakpoints()[k];
      if (t > mid && t <= s) tail += a(t) * b.jump(k);
    }
    CHECK(stieltjes_integral(a, b, s) ==
          near(stieltjes_integral(a, b, mid) + tail, 1e-10));
  }
}

TEST_CASE("lebesgue integral of a step function") {
  const StepFunction s_hat(1.0, {1.0, 2.0}, {0.5, 0.0});
  CHECK(lebesgue_integral(s_hat, 0.0, 2.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(lebesgue_integral(s_hat, 1.3, 1.3) == 0.0);
  const StepFunction one(1.0);
  CHECK(lebesgue_integral(one, 0.0, 5.0) == doctest::Approx(5.0));
  CHECK_THROWS_AS(lebesgue_integral(one, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("lebesgue integral is non-decreasing in the upper limit") {
  RandomStream rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    StepFunction f = random_step(rng, 10);
    // make it non-negative
    std::vector<double> vals = f.values();
    for (double& v : vals) v = std::fabs(v);
    f = StepFunction(std::fabs(f.initial_value()), f.breakpoints(), vals);
    double prev = 0.0;
    for (double hi = 0.0; hi <= 6.0; hi += 0.17) {
      const double cur = lebesgue_integral(f, 0.0, hi);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("antiderivative matches lebesgue integral") {
  RandomStream rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const StepFunction f = random_step(rng, 10);
    const PiecewiseLinear F = antiderivative(f, 0.0, 6.0);
    for (double t = 0.0; t <= 6.0; t += 0.37)
      CHECK(F(t) == near(lebesgue_integral(f, 0.0, t), 1e-12));
  }
}

TEST_CASE("generalized inverse") {
  const StepFunction F(0.0, {1.0, 2.0}, {0.5, 1.0});  // CDF of uncensored {1,2}
  CHECK(kmboot::generalized_inverse(F, 0.5) == 1.0);
  CHECK(kmboot::generalized_inverse(F, 1.0) == 2.0);
  CHECK(kmboot::generalized_inverse(F, 0.2) == 1.0);
  CHECK_THROWS_WITH_AS(kmboot::generalized_inverse(StepFunction(0.0, {1.0}, {0.5}), 0.9),
                       doctest::Contains("mass deficit"), std::runtime_error);
}

TEST_CASE("generalized inverse approximates the identity on a fine CDF") {
  std::vector<double> bp, vals;
  for (int k = 1; k <= 100; ++k) {
    bp.push_back(k / 100.0);
    vals.push_back(k / 100.0);
  }
  const StepFunction F(0.0, bp, vals);
  for (double p = 0.01; p <= 1.0; p += 0.013)
    CHECK(kmboot::generalized_inverse(F, p) == near(p, 0.011));
}

TEST_CASE("generalized inverse is non-decreasing and left-continuous in p") {
  RandomStream rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    // random step CDF
    const std::size_t k = 1 + rng.below(10);
    std::vector<double> bp, vals;
    for (std::size_t i = 0; i < k; ++i) bp.push_back(rng.uniform(0.1, 5.0));
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    double mass = 0.0;
    for (std::size_t i = 0; i < bp.size(); ++i) {
      mass += rng.unit_open();
      vals.push_back(mass);
    }
    for (double& v : vals) v /= mass;  // reaches exactly 1
    const StepFunction F(0.0, bp, vals);

    double prev = 0.0;
    for (double p = 0.01; p <= 1.0; p += 0.005) {
      const double q = kmboot::generalized_inverse(F, p);
      CHECK(q >= prev);
      prev = q;
    }
    // left-continuity at the jump levels of the inverse
    for (double v : vals) {
      if (v >= 1.0) break;
      const double at = kmboot::generalized_inverse(F, v);
      const double just_below = kmboot::generalized_inverse(F, v - 1e-12);
      CHECK(just_below == at);
    }
  }
}

TEST_CASE("piecewise linear basics") {
  const PiecewiseLinear f({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
  CHECK(f(0.5) == doctest::Approx(0.5));
  CHECK(f(1.5) == doctest::Approx(0.5));
  CHECK(f(-1.0) == 0.0);   // clamped
  CHECK(f(3.0) == 0.0);
  CHECK(f.integral(0.0, 2.0) == doctest::Approx(1.0));
  CHECK(f.integral(0.5, 1.5) == doctest::Approx(0.75));
  CHECK_THROWS_AS(PiecewiseLinear({1.0, 1.0}, {0.0, 1.0}), std::invalid_argument);
}
