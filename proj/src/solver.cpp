#include "stieltjes/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace stieltjes {

namespace {

constexpr double kNodeTolerance = 1e-9;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

template <class F>
double checked(std::size_t node, const char* what, F&& eval) {
  double v;
  try {
    v = eval();
  } catch (const SolveError&) {
    throw;
  } catch (const std::exception& e) {
    throw SolveError(node, std::string(what) + " failed: " + e.what());
  }
  if (!std::isfinite(v)) throw SolveError(node, std::string(what) + " is not finite");
  return v;
}

Trajectory run_scheme(const IvpSpec& spec, const Derivator& g, const Partition& part,
                      std::span<const double> rho_plus, std::span<const double> rho_star,
                      std::span<const double> rho) {
  if (!spec.rhs) throw std::invalid_argument("solve: spec has no right-hand side");
  if (!std::isfinite(spec.x0)) throw std::invalid_argument("solve: x0 is not finite");
  if (part.nodes.size() < 2 || part.nodes.back() != g.domain_end()) {
    throw std::invalid_argument("solve: partition is not bound to this derivator");
  }
  if (part.jump_nodes.size() != g.num_jumps()) {
    throw std::invalid_argument("solve: partition jump count does not match derivator");
  }

  const std::size_t steps = part.nodes.size() - 1;
  const bool perturbed = !rho.empty();

  Trajectory tr;
  tr.h = part.h;
  tr.nodes = part.nodes;
  tr.values.reserve(steps + 1);
  tr.right_values.reserve(steps);
  tr.predictor_values.reserve(steps + 1);
  tr.values.push_back(spec.x0);
  tr.predictor_values.push_back(spec.x0);

  // g at the nodes, evaluated once.
  std::vector<double> g_left(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) g_left[k] = g.eval(part.nodes[k]);

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = part.nodes[k];
    const double t_next = part.nodes[k + 1];
    const double u = tr.values[k];
    const double gap = g.jump_gap(t);

    double u_plus = u;
    if (gap > 0.0) {
      u_plus = u + checked(k, "rhs", [&] { return spec.eval(t, u, tr); }) * gap;
    }
    if (perturbed) u_plus += rho_plus[k];
    tr.right_values.push_back(u_plus);

    const double dg = g_left[k + 1] - (g_left[k] + gap);
    const double f_plus = checked(k, "rhs_right", [&] { return spec.eval_right(t, u_plus, tr); });
    double u_star = u_plus + f_plus * dg;
    if (perturbed) u_star += rho_star[k];
    u_star = checked(k + 1, "predictor", [&] { return u_star; });

    const double f_next = checked(k + 1, "rhs", [&] { return spec.eval(t_next, u_star, tr); });
    double u_next = u_plus + 0.5 * (f_plus + f_next) * dg;
    if (perturbed) u_next += rho[k];
    u_next = checked(k + 1, "corrector", [&] { return u_next; });

    tr.predictor_values.push_back(u_star);
    tr.values.push_back(u_next);
  }
  return tr;
}

}  // namespace

Partition build_partition(const Derivator& g, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("build_partition: h must be positive");
  const double T = g.domain_end();

  Partition p;
  p.T = T;
  p.h = h;

  std::vector<std::pair<std::size_t, double>> pins;
  for (const Jump& j : g.jumps()) {
    const double k = std::round(j.time / h);
    if (std::abs(j.time - k * h) > kNodeTolerance * h) {
      throw GridError("H4 violated: jump at t=" + fmt(j.time) + " is not a multiple of h=" +
                      fmt(h));
    }
    pins.emplace_back(static_cast<std::size_t>(k), j.time);
  }

  const double steps = std::round(T / h);
  if (steps < 1.0 || std::abs(T - steps * h) > kNodeTolerance * h) {
    throw GridError("H4 violated: T=" + fmt(T) + " is not a multiple of h=" + fmt(h));
  }
  if (steps > static_cast<double>(std::numeric_limits<std::size_t>::max() / 8)) {
    throw std::invalid_argument("build_partition: too many nodes");
  }
  const auto n = static_cast<std::size_t>(steps);

  p.nodes.resize(n + 1);
  for (std::size_t k = 0; k < n; ++k) p.nodes[k] = static_cast<double>(k) * h;
  p.nodes[n] = T;
  for (const auto& [k, t] : pins) {
    if (k == 0 || k >= n) {
      throw GridError("H4 violated: jump at t=" + fmt(t) + " maps to a boundary node");
    }
    p.nodes[k] = t;
    p.jump_nodes.push_back(k);
  }
  return p;
}

IvpSpec make_autonomous_spec(std::function<double(double, double)> f, double x0) {
  IvpSpec spec;
  spec.rhs = [f = std::move(f)](double t, double x, const Trajectory&) { return f(t, x); };
  spec.x0 = x0;
  return spec;
}

StepResult step(const IvpSpec& spec, const Derivator& g, double t_k, double t_next,
                double u_k, const Trajectory& history) {
  if (!(t_next > t_k)) throw std::invalid_argument("step: t_next must exceed t_k");
  const double gap = g.jump_gap(t_k);
  StepResult r;
  r.u_plus = u_k + (gap > 0.0 ? spec.eval(t_k, u_k, history) * gap : 0.0);
  const double dg = g.eval(t_next) - g.eval_right(t_k);
  const double f_plus = spec.eval_right(t_k, r.u_plus, history);
  r.u_star = r.u_plus + f_plus * dg;
  r.u_next = r.u_plus + 0.5 * (f_plus + spec.eval(t_next, r.u_star, history)) * dg;
  return r;
}

Trajectory solve(const IvpSpec& spec, const Derivator& g, const Partition& part) {
  return run_scheme(spec, g, part, {}, {}, {});
}

Trajectory solve_perturbed(const IvpSpec& spec, const Derivator& g, const Partition& part,
                           std::span<const double> rho_plus, std::span<const double> rho_star,
                           std::span<const double> rho) {
  const std::size_t steps = part.nodes.size() - 1;
  if (rho_plus.size() != steps || rho_star.size() != steps || rho.size() != steps) {
    throw std::invalid_argument("solve_perturbed: perturbation sequences must have length N+1 = " +
                                std::to_string(steps));
  }
  return run_scheme(spec, g, part, rho_plus, rho_star, rho);
}

}  // namespace stieltjes
