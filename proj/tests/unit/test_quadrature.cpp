#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "stieltjes/quadrature.hpp"

using namespace stieltjes;
using doctest::Approx;

namespace {

Derivator identity(double T = 2.0) { return make_identity_derivator(T); }

Derivator pure_jump() {
  return Derivator(3.0, [](double) { return 0.0; }, {{1.0, 1.0}});
}

// gC(t) = t with a unit jump at 0.5.
Derivator jump_at_half() {
  return Derivator(2.0, [](double t) { return t; }, {{0.5, 1.0}});
}

}  // namespace

TEST_CASE("one-point rule") {
  const ScalarFn t = [](double s) { return s; };
  CHECK(onepoint_rule(t, identity(), 0.0, 1.0) == 0.0);
  CHECK(std::abs(onepoint_rule(t, identity(), 0.0, 1.0) - 0.5) <=
        error_bound(RuleKind::OnePoint, 1.0, 1.0, 0.0, 1.0, 1.0));
  CHECK(onepoint_rule([](double s) { return s * s; }, pure_jump(), 0.0, 2.0) == Approx(1.0));
  CHECK_THROWS_AS(onepoint_rule(t, identity(), 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("trapezoid rule") {
  CHECK(trapezoid_rule([](double s) { return s; }, identity(), 0.0, 1.0) == Approx(0.5));
  const double sq = trapezoid_rule([](double s) { return s * s; }, identity(), 0.0, 1.0);
  CHECK(sq == Approx(0.5));
  CHECK(std::abs(sq - 1.0 / 3.0) <= error_bound(RuleKind::Trapezoid, 1.0, 1.0, 0.0, 1.0, 1.0));
  CHECK_THROWS_AS(trapezoid_rule([](double s) { return s; }, identity(), 1.5, 1.0),
                  std::invalid_argument);
}

TEST_CASE("all rules are exact on constants") {
  const double kappa = -1.75;
  const ScalarFn f = [kappa](double) { return kappa; };
  for (const Derivator& g : {identity(), pure_jump(), jump_at_half(), make_test_derivator(4)}) {
    const double a = 0.25, b = std::min(1.75, g.domain_end());
    const double exact = kappa * g.interval_measure(a, b);
    for (RuleKind k : {RuleKind::OnePoint, RuleKind::Trapezoid, RuleKind::CorrectedOnePoint,
                       RuleKind::CorrectedTrapezoid}) {
      CHECK(apply_rule(k, f, f, g, a, b) == Approx(exact).epsilon(1e-13));
    }
  }
  // One jump at a.
  const Derivator g = jump_at_half();
  CHECK(corrected_onepoint_rule(f, f, g, 0.5, 1.5) == Approx(kappa * 2.0));
  CHECK(corrected_trapezoid_rule(f, f, g, 0.0, 1.5) == Approx(kappa * 2.5));
}

TEST_CASE("corrected rules on f = g with a jump at the left end") {
  const Derivator g = jump_at_half();
  const ScalarFn f = [g](double t) { return g.eval(t); };
  const ScalarFn fr = [g](double t) { return g.eval_right(t); };
  const double exact = 2.5;
  CHECK(oracle_integral(f, g, 0.5, 1.5, 1000000, fr) == Approx(exact).epsilon(1e-10));

  const double one = corrected_onepoint_rule(f, fr, g, 0.5, 1.5);
  CHECK(one == Approx(2.0));
  CHECK(std::abs(one - exact) <= error_bound(RuleKind::CorrectedOnePoint, 1.0, 1.0, 0.5, 1.5, 0));

  const double trap = corrected_trapezoid_rule(f, fr, g, 0.5, 1.5);
  CHECK(trap == Approx(exact));
  CHECK(std::abs(trap - exact) <=
        error_bound(RuleKind::CorrectedTrapezoid, 1.0, 1.0, 0.5, 1.5, 0));
}

TEST_CASE("corrected rules reduce to the plain rules without interior jumps") {
  const Derivator g = make_test_derivator(2);
  const ScalarFn f = [](double t) { return std::cos(t) + t; };
  CHECK(corrected_onepoint_rule(f, f, g, 0.1, 3.0) == Approx(onepoint_rule(f, g, 0.1, 3.0)));
  CHECK(corrected_trapezoid_rule(f, f, g, 0.1, 3.0) == Approx(trapezoid_rule(f, g, 0.1, 3.0)));
  CHECK(corrected_onepoint_rule(f, f, identity(), 0.0, 1.0) ==
        Approx(onepoint_rule(f, identity(), 0.0, 1.0)));
}

TEST_CASE("oracle integral") {
  CHECK(oracle_integral([](double s) { return s * s; }, identity(), 0.0, 1.0, 100000) ==
        Approx(1.0 / 3.0).epsilon(1e-8));
  for (std::size_t n : {1u, 7u, 1000u}) {
    CHECK(oracle_integral([](double s) { return s * s; }, pure_jump(), 0.0, 2.0, n) == 1.0);
  }
  const ScalarFn f = [](double s) { return std::exp(s); };
  const Derivator g = make_test_derivator(2);
  double prev = 1e300;
  const double ref = oracle_integral(f, g, 0.0, 9.0, 1 << 16);
  for (std::size_t n = 16; n <= 4096; n *= 4) {
    const double diff = std::abs(oracle_integral(f, g, 0.0, 9.0, n) - ref);
    CHECK(diff < prev);
    prev = diff;
  }
  CHECK_THROWS_AS(oracle_integral(f, g, 2.0, 1.0, 10), std::invalid_argument);
}

TEST_CASE("error bounds") {
  CHECK(error_bound(RuleKind::OnePoint, 1.0, 1.0, 0.0, 1.0, 1.0) == Approx(1.0));
  CHECK(error_bound(RuleKind::Trapezoid, 2.0, 0.5, 0.0, 4.0, 3.0) ==
        Approx(2.0 * std::sqrt(2.0) * 3.0));
  CHECK(error_bound(RuleKind::Trapezoid, 2.0, 0.5, 0.0, 4.0, 3.0) == Approx(8.4853).epsilon(1e-4));
  CHECK(error_bound(RuleKind::CorrectedTrapezoid, 1.0, 1.0, 0.0, 0.1, 0.0) == Approx(0.005));
  CHECK(error_bound(RuleKind::CorrectedOnePoint, 3.0, 0.2, 1.0, 1.5, 99.0) == Approx(2.25));
  CHECK_THROWS_AS(error_bound(RuleKind::OnePoint, 1.0, 0.0, 0.0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(error_bound(RuleKind::OnePoint, 1.0, 1.5, 0.0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK(sampled_variation([](double t) { return std::sin(t); }, 0.0, M_PI) ==
        Approx(2.0).epsilon(1e-6));
}

TEST_CASE("property: bounds hold on random g-Lipschitz integrands") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 24; ++i) {
    const int nj = i % 5;
    const Derivator g = make_test_derivator(nj, 2.0 + 4.0 * u(rng));
    const double c1 = -2.0 + 4.0 * u(rng), c2 = -2.0 + 4.0 * u(rng);
    const ScalarFn f = [g, c1, c2](double t) { return c1 * g.eval(t) + c2 * std::sin(g.eval(t)); };
    const ScalarFn fr = [g, c1, c2](double t) {
      const double v = t < 10.0 ? g.eval_right(t) : g.eval(t);
      return c1 * v + c2 * std::sin(v);
    };
    const double a = (nj > 0 && i % 2) ? g.jumps()[0].time : 9.0 * u(rng);
    const double b = std::min(10.0, a + 0.05 + 1.5 * u(rng));
    const double Hf = std::abs(c1) + std::abs(c2);
    const double H = g.regularity()->H * std::max(1.0, Hf);
    const double var = Hf * g.interval_measure(a, b);
    const double ref = oracle_integral(f, g, a, b, 200000, fr);
    for (RuleKind k : {RuleKind::OnePoint, RuleKind::Trapezoid, RuleKind::CorrectedOnePoint,
                       RuleKind::CorrectedTrapezoid}) {
      const double err = std::abs(apply_rule(k, f, fr, g, a, b) - ref);
      CHECK(err <= error_bound(k, H, 1.0, a, b, var) + 1e-9);
      ++checked;
    }
  }
  CHECK(checked == 96);
}

TEST_CASE("property: composite corrected rules over a grid containing the jumps") {
  const Derivator g = make_test_derivator(4);
  const ScalarFn f = [g](double t) { return std::sin(g.eval(t)); };
  const ScalarFn fr = [g](double t) { return std::sin(t < 10.0 ? g.eval_right(t) : g.eval(t)); };
  const double ref = oracle_integral(f, g, 0.0, 10.0, 1000000, fr);
  const double H = g.regularity()->H;
  for (int m : {10, 50, 200}) {
    const double w = 10.0 / m;
    double sum1 = 0.0, sum2 = 0.0, bound1 = 0.0, bound2 = 0.0;
    for (int i = 0; i < m; ++i) {
      const double a = i * w, b = (i + 1 == m) ? 10.0 : (i + 1) * w;
      sum1 += corrected_onepoint_rule(f, fr, g, a, b);
      sum2 += corrected_trapezoid_rule(f, fr, g, a, b);
      bound1 += error_bound(RuleKind::CorrectedOnePoint, H, 1.0, a, b, 0.0);
      bound2 += error_bound(RuleKind::CorrectedTrapezoid, H, 1.0, a, b, 0.0);
    }
    CHECK(std::abs(sum1 - ref) <= bound1);
    CHECK(std::abs(sum2 - ref) <= bound2);
  }
}
