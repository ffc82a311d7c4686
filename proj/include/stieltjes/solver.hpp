#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stieltjes/derivator.hpp"

namespace stieltjes {

/// Uniform grid t_k = k h, k = 0..N+1, with t_{N+1} = T and every jump of the
/// bound derivator on a node. Jump nodes hold the exact jump time.
struct Partition {
  double T = 0.0;
  double h = 0.0;
  std::vector<double> nodes;
  std::vector<std::size_t> jump_nodes;  // indices k with t_k ∈ D_g, increasing

  std::size_t last() const { return nodes.size() - 1; }  // N + 1
};

/// Raised when the grid cannot contain D_g or T is not a multiple of h.
class GridError : public std::invalid_argument {
 public:
  explicit GridError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when the scheme fails at a node (rhs failure or non-finite state).
class SolveError : public std::runtime_error {
 public:
  SolveError(std::size_t node, const std::string& what)
      : std::runtime_error("node " + std::to_string(node) + ": " + what), node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

Partition build_partition(const Derivator& g, double h);

/// Node values of a numerical or exact solution.
///   values[k]           u_k,  k = 0..N+1
///   right_values[k]     u_k⁺, k = 0..N
///   predictor_values[k] u*_k, k = 1..N+1; entry 0 holds u_0
/// While a solve is running the vectors hold the nodes computed so far.
struct Trajectory {
  double h = 0.0;
  std::vector<double> nodes;
  std::vector<double> values;
  std::vector<double> right_values;
  std::vector<double> predictor_values;
};

/// f(t, x, history); history is the trajectory up to the current node.
using Rhs = std::function<double(double, double, const Trajectory&)>;

struct RegularityConstants {
  double K1 = 0.0;
  double K2 = 0.0;
  double K3 = 0.0;
  double H = 0.0;
};

struct IvpSpec {
  Rhs rhs;
  /// f(t+, x, history). Defaults to rhs, which is valid when f(., x) is
  /// right-continuous at the jumps of g.
  Rhs rhs_right;
  double x0 = 0.0;
  std::optional<RegularityConstants> constants;

  double eval(double t, double x, const Trajectory& history) const {
    return rhs(t, x, history);
  }
  double eval_right(double t, double x, const Trajectory& history) const {
    return rhs_right ? rhs_right(t, x, history) : rhs(t, x, history);
  }
};

IvpSpec make_autonomous_spec(std::function<double(double, double)> f, double x0);

struct StepResult {
  double u_plus = 0.0;
  double u_star = 0.0;
  double u_next = 0.0;
};

/// One step from t_k to t_next:
///   u⁺      = u_k + f(t_k, u_k) Δ⁺g(t_k)
///   u*      = u⁺ + f(t_k⁺, u⁺) (g(t_next) - g(t_k⁺))
///   u_next  = u⁺ + ½ (f(t_k⁺, u⁺) + f(t_next, u*)) (g(t_next) - g(t_k⁺))
StepResult step(const IvpSpec& spec, const Derivator& g, double t_k, double t_next,
                double u_k, const Trajectory& history);

Trajectory solve(const IvpSpec& spec, const Derivator& g, const Partition& part);

/// The scheme with additive perturbations after each stage:
/// rho_plus[k] is added to u_k⁺ (k = 0..N), rho_star[k] to u*_{k+1}, rho[k] to u_{k+1}.
Trajectory solve_perturbed(const IvpSpec& spec, const Derivator& g, const Partition& part,
                           std::span<const double> rho_plus, std::span<const double> rho_star,
                           std::span<const double> rho);

}  // namespace stieltjes
