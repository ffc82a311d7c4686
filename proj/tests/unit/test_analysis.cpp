#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "stieltjes/analysis.hpp"
#include "stieltjes/linear.hpp"

using namespace stieltjes;
using doctest::Approx;

namespace {

// Exact solution read back from a trajectory at its own nodes.
struct NodeLookup {
  const Trajectory* tr;
  bool right;
  double operator()(double t) const {
    const auto it = std::lower_bound(tr->nodes.begin(), tr->nodes.end(), t);
    const auto k = static_cast<std::size_t>(it - tr->nodes.begin());
    if (right && k < tr->right_values.size()) return tr->right_values[k];
    return tr->values[k];
  }
};

}  // namespace

TEST_CASE("error report: trivial cases") {
  const Derivator g = make_test_derivator(2);
  const IvpSpec zero = make_autonomous_spec([](double, double) { return 0.0; }, 2.0);
  const Trajectory u = solve(zero, g, build_partition(g, 0.1));
  const ScalarFn c = [](double) { return 2.0; };
  const ErrorReport r = error_report(u, c, c, g, zero);
  CHECK(r.max_e == 0.0);
  CHECK(r.max_e_star == 0.0);
  CHECK(r.max_e_star_local == 0.0);
  CHECK(r.max_e_plus == 0.0);
  CHECK(r.e.size() == u.values.size());
  CHECK(r.e_plus.size() == u.right_values.size());

  const LinearBenchmark b = make_linear_benchmark(2, -0.5, 1.0);
  const Trajectory v = solve(b.spec, b.g, build_partition(b.g, 0.1));
  const ErrorReport self =
      error_report(v, NodeLookup{&v, false}, NodeLookup{&v, true}, b.g, b.spec);
  CHECK(self.max_e == 0.0);
  CHECK(self.max_e_plus == 0.0);
  CHECK(self.max_e_star_local == Approx(0.0));
  CHECK(self.e[0] == 0.0);
}

TEST_CASE("error report: reference linear configuration") {
  const LinearBenchmark b = make_linear_benchmark(2, -0.5, 1.0);
  const Trajectory u = solve(b.spec, b.g, build_partition(b.g, 0.1));
  const ErrorReport r = error_report(u, b.exact, b.exact_right, b.g, b.spec);
  CHECK(r.max_e_star == Approx(1.1704e-1).epsilon(0.15));
  CHECK(r.max_e == Approx(3.1399e-2).epsilon(0.1));
  CHECK(r.max_e_plus_at_jumps == Approx(1.2573e-2).epsilon(0.1));
  CHECK(r.max_e_plus <= r.max_e);
  double m = 0.0;
  for (double e : r.e) m = std::max(m, std::abs(e));
  CHECK(r.max_e == m);
}

TEST_CASE("truncation errors") {
  const Derivator g = make_test_derivator(2);
  const IvpSpec zero = make_autonomous_spec([](double, double) { return 0.0; }, 1.0);
  const ScalarFn one = [](double) { return 1.0; };
  const TruncationErrors z = truncation_errors(one, one, g, zero, build_partition(g, 0.1));
  CHECK(z.max_abs_sigma_star() == 0.0);
  CHECK(z.max_abs_sigma() == 0.0);
  CHECK(z.max_abs_tau() == 0.0);

  // Identity derivator, f = -x.
  const Derivator id = make_identity_derivator(1.0);
  const IvpSpec decay = make_autonomous_spec([](double, double x) { return -x; }, 1.0);
  const ScalarFn ex = [](double t) { return std::exp(-t); };
  const Partition pid = build_partition(id, 1e-2);
  const Trajectory xid = exact_trajectory(ex, ex, id, decay, pid);
  const RegularityConstants rid = measure_constants(decay, id, xid);
  const TruncationErrors tid = truncation_errors(ex, ex, id, decay, pid);
  CHECK(tid.max_abs_sigma() <= 0.5 * rid.H * rid.H * 1e-4);
  CHECK(tid.sigma.size() == 100);

  // Linear Stieltjes test.
  const LinearBenchmark b = make_linear_benchmark(2, -0.5, 1.0);
  const double h = 1e-2;
  const Partition part = build_partition(b.g, h);
  const Trajectory x = exact_trajectory(b.exact, b.exact_right, b.g, b.spec, part);
  const RegularityConstants rc = measure_constants(b.spec, b.g, x);
  const TruncationErrors te = truncation_errors(b.exact, b.exact_right, b.g, b.spec, part);
  const double H2h2 = rc.H * rc.H * h * h;
  for (std::size_t k = 0; k < te.tau.size(); ++k) {
    REQUIRE(std::abs(te.sigma_star[k]) <= H2h2);
    REQUIRE(std::abs(te.sigma[k]) <= 0.5 * H2h2);
    REQUIRE(std::abs(te.tau[k]) <= 0.5 * H2h2 + 0.5 * rc.K2 * rc.H * H2h2 * h);
  }
}

TEST_CASE("consistency: max|tau|/h decreases with h") {
  const LinearBenchmark b = make_linear_benchmark(4, -0.5, 1.0);
  double prev = 1e300;
  for (double h : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const Partition part = build_partition(b.g, h);
    const double r = truncation_errors(b.exact, b.exact_right, b.g, b.spec, part).max_abs_tau() / h;
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("measured constants for the linear test") {
  const LinearBenchmark b = make_linear_benchmark(4, -0.5, 1.0);
  const Partition part = build_partition(b.g, 1e-2);
  const Trajectory x = exact_trajectory(b.exact, b.exact_right, b.g, b.spec, part);
  const RegularityConstants rc = measure_constants(b.spec, b.g, x);
  CHECK(rc.K1 == 1.0);
  CHECK(rc.K2 == Approx(0.5).epsilon(1e-6));
  CHECK(rc.K3 == Approx(0.5).epsilon(1e-6));
  CHECK(rc.H >= b.g.regularity()->H * 0.99);
}

TEST_CASE("bound constants") {
  const BoundConstants c = BoundConstants::make(1, 1, 1, 1, 0.1, 2);
  CHECK(c.G1 == Approx(0.105));
  CHECK(c.G2 == Approx(1.105));
  CHECK(c.G3 == Approx(1.0));
  CHECK(c.G4 == Approx(0.1));
  CHECK(c.G5 == Approx(1.1));
  CHECK(c.G6 == Approx(0.05));

  const BoundConstants tiny = BoundConstants::make(2, 3, 1, 1, 1e-12, 0);
  CHECK(tiny.G1 == Approx(0.0).epsilon(1e-9));
  CHECK(tiny.G2 == Approx(6.0));

  const double tau = 1e-3;
  CHECK(theoretical_bounds(c, 1.0, 0.0, tau) ==
        Approx(std::pow(1 + c.G2, 2) * (tau / c.G1) * std::exp(1.0 * c.G1 / 0.1)));
  CHECK(predictor_bound(c, 1.0, 0.0, tau, true) ==
        Approx((1 + c.G5) * std::exp(c.G4) * theoretical_bounds(c, 1.0, 0.0, tau)));
  CHECK(predictor_bound(c, 1.0, 0.0, tau, false) ==
        Approx(std::exp(c.G4) * theoretical_bounds(c, 1.0, 0.0, tau)));
  CHECK(right_limit_bound(c, 1.0, 0.0, tau, true) ==
        Approx(2.0 * theoretical_bounds(c, 1.0, 0.0, tau)));
  CHECK(stability_bound(c, 1.0, 0.0, tau, 0.0, 0.0, 0.0) ==
        Approx(theoretical_bounds(c, 1.0, 0.0, tau)));
  CHECK(stability_bound(c, 1.0, 0.0, tau, 1e-4, 1e-4, 1e-4) >
        theoretical_bounds(c, 1.0, 0.0, tau));

  const BoundConstants none = BoundConstants::make(0, 0, 0, 0, 0.1, 0);
  CHECK_THROWS_AS(theoretical_bounds(none, 1.0, 0.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(BoundConstants::make(1, -1, 1, 1, 0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(BoundConstants::make(1, 1, 1, 1, 0.0, 0), std::invalid_argument);
}

TEST_CASE("global and stability bounds hold on the linear test") {
  const LinearBenchmark b = make_linear_benchmark(2, -0.5, 1.0);
  const double h = 1e-2;
  const Partition part = build_partition(b.g, h);
  const Trajectory x = exact_trajectory(b.exact, b.exact_right, b.g, b.spec, part);
  const BoundConstants c =
      BoundConstants::make(measure_constants(b.spec, b.g, x), h, b.g.num_jumps());
  const double tau = truncation_errors(b.exact, b.exact_right, b.g, b.spec, part).max_abs_tau();
  const Trajectory u = solve(b.spec, b.g, part);
  const ErrorReport r = error_report(u, b.exact, b.exact_right, b.g, b.spec);
  for (std::size_t k = 1; k < part.nodes.size(); ++k) {
    REQUIRE(std::abs(r.e[k]) <= theoretical_bounds(c, part.nodes[k], 0.0, tau));
  }
  for (std::size_t k = 0; k + 1 < part.nodes.size(); ++k) {
    const double t = part.nodes[k];
    REQUIRE(std::abs(r.e_plus[k]) <= right_limit_bound(c, t, 0.0, tau, b.g.is_jump(t)));
  }

  const std::size_t n = part.nodes.size() - 1;
  const std::vector<double> rho(n, 1e-9);
  const Trajectory up = solve_perturbed(b.spec, b.g, part, rho, rho, rho);
  double dev = 0.0;
  for (std::size_t k = 0; k <= n; ++k) dev = std::max(dev, std::abs(up.values[k] - u.values[k]));
  CHECK(dev > 0.0);
  CHECK(dev <= stability_bound(c, 10.0, 0.0, 0.0, 1e-9, 1e-9, 1e-9));
}

TEST_CASE("estimate_order") {
  const std::vector<double> h{1e-1, 1e-2};
  CHECK(estimate_order(h, std::vector<double>{1e-2, 1e-4}) == Approx(2.0));
  const std::vector<double> hs{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  const std::vector<double> reference{3.1399e-02, 3.3911e-04, 3.4002e-06, 3.4010e-08, 3.4173e-10};
  CHECK(estimate_order(hs, reference) == Approx(1.99252).epsilon(1e-5));
  std::vector<double> scaled = reference;
  for (double& v : scaled) v *= 123.0;
  CHECK(estimate_order(hs, scaled) == Approx(estimate_order(hs, reference)).epsilon(1e-12));
  CHECK_THROWS_AS(estimate_order(std::vector<double>{0.1}, std::vector<double>{0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_order(h, std::vector<double>{0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_order(h, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("convergence table") {
  const ProblemFactory linear = [](int n) { return make_linear_benchmark(n, -0.5, 1.0); };
  const std::vector<int> two{2};
  const std::vector<double> one_h{1e-1};
  auto cells = convergence_table(linear, one_h, two);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].ok);
  CHECK(cells[0].num_jumps == 2);
  CHECK(cells[0].max_e == Approx(2.9196e-2).epsilon(1e-3));

  const std::vector<double> hs{1e-1, 1e-2, 1e-3};
  const std::vector<int> jumps{2, 4, 6, 8, 10};
  cells = convergence_table(linear, hs, jumps);
  REQUIRE(cells.size() == 15);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CHECK(cells[i].num_jumps == jumps[i / 3]);
    CHECK(cells[i].h == hs[i % 3]);
    REQUIRE(cells[i].ok);
    if (i % 3) {
      CHECK(cells[i].max_e < cells[i - 1].max_e);
      CHECK(cells[i].max_e_star < cells[i - 1].max_e_star);
      CHECK(cells[i].max_e_plus < cells[i - 1].max_e_plus);
    }
  }

  const ProblemFactory silk = [](int) {
    return make_linear_benchmark(make_silkworm_derivator(10.0), -0.5, 1.0);
  };
  const std::vector<double> mixed{0.3, 0.1};
  const std::vector<int> three{3};
  cells = convergence_table(silk, mixed, three);
  REQUIRE(cells.size() == 2);
  CHECK_FALSE(cells[0].ok);
  CHECK(cells[0].failure.find("H4") != std::string::npos);
  CHECK(cells[1].ok);

  std::ostringstream csv;
  write_convergence_csv(csv, cells);
  CHECK(csv.str().rfind("num_jumps,h,max_e_star,max_e,max_e_plus\n", 0) == 0);
  CHECK(csv.str().find("3,3.0000e-01,failed,failed,failed\n") != std::string::npos);
  CHECK(csv.str().find("3,1.0000e-01,") != std::string::npos);
}
