#include "stieltjes/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace stieltjes {

namespace {

double max_abs(std::span<const double> v, std::size_t from = 0) {
  double m = 0.0;
  for (std::size_t i = from; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

}  // namespace

Trajectory exact_trajectory(const ScalarFn& exact, const ScalarFn& exact_right,
                            const Derivator& g, const IvpSpec& spec, const Partition& part) {
  const std::size_t n = part.nodes.size();
  Trajectory x;
  x.h = part.h;
  x.nodes = part.nodes;
  x.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) x.values[k] = exact(part.nodes[k]);
  x.right_values.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) x.right_values[k] = exact_right(part.nodes[k]);

  // The rhs may read the history (delay terms); hand it the whole exact trajectory,
  // which contains the solver's view as a prefix.
  x.predictor_values.assign(n, 0.0);
  x.predictor_values[0] = x.values[0];
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double tk = part.nodes[k];
    const double delta = g.eval(part.nodes[k + 1]) - g.eval_right(tk);
    x.predictor_values[k + 1] =
        x.right_values[k] + spec.eval_right(tk, x.right_values[k], x) * delta;
  }
  return x;
}

ErrorReport error_report(const Trajectory& traj, const ScalarFn& exact,
                         const ScalarFn& exact_right, const Derivator& g, const IvpSpec& spec) {
  const std::size_t n = traj.nodes.size();
  if (n < 2 || traj.values.size() != n || traj.right_values.size() != n - 1 ||
      traj.predictor_values.size() != n) {
    throw std::invalid_argument("error_report: incomplete trajectory");
  }
  Partition part;
  part.h = traj.h;
  part.nodes = traj.nodes;
  part.T = traj.nodes.back();
  const Trajectory x = exact_trajectory(exact, exact_right, g, spec, part);

  ErrorReport r;
  r.e.resize(n);
  r.e_star.resize(n);
  r.e_star_local.resize(n);
  r.e_plus.resize(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    r.e[k] = traj.values[k] - x.values[k];
    r.e_star[k] = traj.predictor_values[k] - x.values[k];
    r.e_star_local[k] = traj.predictor_values[k] - x.predictor_values[k];
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    r.e_plus[k] = traj.right_values[k] - x.right_values[k];
    if (g.is_jump(traj.nodes[k])) {
      r.max_e_plus_at_jumps = std::max(r.max_e_plus_at_jumps, std::abs(r.e_plus[k]));
    }
  }
  r.max_e = max_abs(r.e);
  r.max_e_star = max_abs(r.e_star, 1);
  r.max_e_star_local = max_abs(r.e_star_local, 1);
  r.max_e_plus = max_abs(r.e_plus);
  return r;
}

double TruncationErrors::max_abs_sigma_star() const { return max_abs(sigma_star); }
double TruncationErrors::max_abs_sigma() const { return max_abs(sigma); }
double TruncationErrors::max_abs_tau() const { return max_abs(tau); }

TruncationErrors truncation_errors(const ScalarFn& exact, const ScalarFn& exact_right,
                                   const Derivator& g, const IvpSpec& spec,
                                   const Partition& part) {
  const Trajectory x = exact_trajectory(exact, exact_right, g, spec, part);
  const std::size_t steps = part.nodes.size() - 1;
  TruncationErrors te;
  te.sigma_star.resize(steps);
  te.sigma.resize(steps);
  te.tau.resize(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double tk = part.nodes[k];
    const double tn = part.nodes[k + 1];
    const double delta = g.eval(tn) - g.eval_right(tk);
    const double xp = x.right_values[k];
    const double xn = x.values[k + 1];
    const double fp = spec.eval_right(tk, xp, x);
    te.sigma_star[k] = xn - xp - fp * delta;
    te.sigma[k] = xn - xp - 0.5 * (fp + spec.eval(tn, xn, x)) * delta;
    te.tau[k] = xn - xp - 0.5 * (fp + spec.eval(tn, x.predictor_values[k + 1], x)) * delta;
  }
  return te;
}

BoundConstants BoundConstants::make(double K1, double K2, double K3, double H, double h,
                                    std::size_t num_jumps) {
  for (double v : {K1, K2, K3, H}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("BoundConstants: constants must be finite and >= 0");
    }
  }
  if (!(h > 0.0)) throw std::invalid_argument("BoundConstants: h must be positive");
  BoundConstants c;
  c.K1 = K1;
  c.K2 = K2;
  c.K3 = K3;
  c.H = H;
  c.h = h;
  c.num_jumps = num_jumps;
  const double Hh = H * h;
  c.G1 = 0.5 * K2 * Hh + 0.5 * K3 * Hh + 0.5 * K3 * K3 * Hh * Hh;
  c.G2 = K1 * K2 + 0.5 * K1 * K2 * K3 * Hh + 0.5 * K1 * K2 * K2 * Hh +
         0.5 * K1 * K2 * K2 * K3 * Hh * Hh;
  c.G3 = K1 * K2;
  c.G4 = K3 * Hh;
  c.G5 = c.G3 * (1.0 + c.G4);
  c.G6 = 0.5 * K2 * Hh;
  return c;
}

BoundConstants BoundConstants::make(const RegularityConstants& rc, double h,
                                    std::size_t num_jumps) {
  return make(rc.K1, rc.K2, rc.K3, rc.H, h, num_jumps);
}

namespace {

double amplification(const BoundConstants& c, double t) {
  if (!(c.G1 > 0.0)) throw std::invalid_argument("bound: G1 must be positive");
  return std::pow(1.0 + c.G2, static_cast<double>(c.num_jumps)) * std::exp(t * c.G1 / c.h);
}

}  // namespace

double theoretical_bounds(const BoundConstants& c, double t, double e0, double tau_max) {
  const double a = amplification(c, t);
  return a * (std::abs(e0) + tau_max / c.G1);
}

double predictor_bound(const BoundConstants& c, double t, double e0, double tau_max,
                       bool at_jump) {
  return (1.0 + (at_jump ? c.G5 : 0.0)) * theoretical_bounds(c, t, e0, tau_max) *
         std::exp(c.G4);
}

double right_limit_bound(const BoundConstants& c, double t, double e0, double tau_max,
                         bool at_jump) {
  return (1.0 + (at_jump ? c.G3 : 0.0)) * theoretical_bounds(c, t, e0, tau_max);
}

double stability_bound(const BoundConstants& c, double t, double e0, double tau_max,
                       double rho, double rho_plus, double rho_star) {
  const double a = amplification(c, t);
  const double forcing = tau_max + std::abs(rho) + c.G1 * std::abs(rho_plus) +
                         c.G6 * std::abs(rho_star);
  return a * (std::abs(e0) + forcing / c.G1);
}

RegularityConstants measure_constants(const IvpSpec& spec, const Derivator& g,
                                      const Trajectory& exact) {
  const std::size_t n = exact.nodes.size();
  if (n < 2 || exact.values.size() != n || exact.right_values.size() != n - 1) {
    throw std::invalid_argument("measure_constants: incomplete exact trajectory");
  }
  RegularityConstants rc;
  for (const Jump& j : g.jumps()) rc.K1 = std::max(rc.K1, j.gap);

  double lo = exact.values[0], hi = exact.values[0];
  for (double v : exact.values) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : exact.right_values) lo = std::min(lo, v), hi = std::max(hi, v);

  auto slope = [](auto&& f, double x) {
    const double dx = 1e-6 * std::max(1.0, std::abs(x));
    return std::abs((f(x + dx) - f(x - dx)) / (2.0 * dx));
  };
  for (std::size_t k = 0; k < n; ++k) {
    const double t = exact.nodes[k];
    const bool has_right = k + 1 < n;
    const double samples[] = {exact.values[k], has_right ? exact.right_values[k] : lo, lo,
                              0.5 * (lo + hi), hi};
    for (double x : samples) {
      rc.K2 = std::max(rc.K2, slope([&](double y) { return spec.eval(t, y, exact); }, x));
      if (has_right) {
        rc.K3 = std::max(rc.K3,
                         slope([&](double y) { return spec.eval_right(t, y, exact); }, x));
      }
    }
  }

  double H = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double tk = exact.nodes[k], tn = exact.nodes[k + 1];
    const double step = tn - tk;
    H = std::max(H, std::abs(g.continuous(tn) - g.continuous(tk)) / step);
    const double fr = spec.eval_right(tk, exact.right_values[k], exact);
    const double fn = spec.eval(tn, exact.values[k + 1], exact);
    H = std::max(H, std::abs(fn - fr) / step);
    const double dg = g.eval(tn) - g.eval_right(tk);
    if (dg > 1e-12) H = std::max(H, std::abs(fn - fr) / dg);
  }
  rc.H = H;
  return rc;
}

double estimate_order(std::span<const double> h_values, std::span<const double> errors) {
  if (h_values.size() != errors.size()) {
    throw std::invalid_argument("estimate_order: size mismatch");
  }
  if (h_values.size() < 2) throw std::invalid_argument("estimate_order: need >= 2 points");
  const double n = static_cast<double>(h_values.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h_values.size(); ++i) {
    if (!(h_values[i] > 0.0) || !(errors[i] > 0.0)) {
      throw std::invalid_argument("estimate_order: values must be positive");
    }
    const double x = std::log10(h_values[i]);
    const double y = std::log10(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("estimate_order: h values must differ");
  return (n * sxy - sx * sy) / den;
}

std::vector<ConvergenceCell> convergence_table(const ProblemFactory& factory,
                                               std::span<const double> h_values,
                                               std::span<const int> jump_counts) {
  std::vector<ConvergenceCell> cells;
  cells.reserve(h_values.size() * jump_counts.size());
  for (int nj : jump_counts) {
    const TestProblem prob = factory(nj);
    for (double h : h_values) {
      ConvergenceCell cell;
      cell.num_jumps = nj;
      cell.h = h;
      try {
        const Partition part = build_partition(prob.g, h);
        const Trajectory u = solve(prob.spec, prob.g, part);
        const ErrorReport r = error_report(u, prob.exact, prob.exact_right, prob.g, prob.spec);
        cell.ok = true;
        cell.max_e_star = r.max_e_star;
        cell.max_e = r.max_e;
        cell.max_e_plus = r.max_e_plus;
        cell.max_e_plus_at_jumps = r.max_e_plus_at_jumps;
      } catch (const GridError& err) {
        cell.failure = err.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceCell> cells) {
  out << "num_jumps,h,max_e_star,max_e,max_e_plus\n";
  char buf[160];
  for (const ConvergenceCell& c : cells) {
    if (c.ok) {
      std::snprintf(buf, sizeof buf, "%d,%.4e,%.4e,%.4e,%.4e\n", c.num_jumps, c.h,
                    c.max_e_star, c.max_e, c.max_e_plus);
    } else {
      std::snprintf(buf, sizeof buf, "%d,%.4e,failed,failed,failed\n", c.num_jumps, c.h);
    }
    out << buf;
  }
}

}  // namespace stieltjes
