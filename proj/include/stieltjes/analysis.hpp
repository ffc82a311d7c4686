#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stieltjes/derivator.hpp"
#include "stieltjes/models.hpp"
#include "stieltjes/solver.hpp"

namespace stieltjes {

/// Node errors of a numerical trajectory against the exact solution.
///   e[k]            u_k - x(t_k),        k = 0..N+1
///   e_star[k]       u*_k - x(t_k),       k = 1..N+1 (entry 0 is e_0)
///   e_star_local[k] u*_k - x*_k with x*_{k+1} = x_k⁺ + f(t_k⁺, x_k⁺)(g(t_{k+1}) - g(t_k⁺))
///   e_plus[k]       u_k⁺ - x(t_k⁺),      k = 0..N
/// Maxima of e_star and e_star_local skip entry 0.
struct ErrorReport {
  std::vector<double> e;
  std::vector<double> e_star;
  std::vector<double> e_star_local;
  std::vector<double> e_plus;

  double max_e = 0.0;
  double max_e_star = 0.0;
  double max_e_star_local = 0.0;
  double max_e_plus = 0.0;
  /// max |e_k⁺| restricted to nodes in D_g (0 when there are none).
  double max_e_plus_at_jumps = 0.0;
};

/// The exact solution sampled on part: values x(t_k), right_values x(t_k⁺),
/// predictor_values x*_k (entry 0 holds x_0).
Trajectory exact_trajectory(const ScalarFn& exact, const ScalarFn& exact_right,
                            const Derivator& g, const IvpSpec& spec, const Partition& part);

ErrorReport error_report(const Trajectory& traj, const ScalarFn& exact,
                         const ScalarFn& exact_right, const Derivator& g, const IvpSpec& spec);

/// Local errors of the exact solution, entry k describing step k -> k+1.
struct TruncationErrors {
  std::vector<double> sigma_star;
  std::vector<double> sigma;
  std::vector<double> tau;

  double max_abs_sigma_star() const;
  double max_abs_sigma() const;
  double max_abs_tau() const;
};

TruncationErrors truncation_errors(const ScalarFn& exact, const ScalarFn& exact_right,
                                   const Derivator& g, const IvpSpec& spec,
                                   const Partition& part);

/// Error-propagation constants for step h.
struct BoundConstants {
  double K1 = 0.0, K2 = 0.0, K3 = 0.0, H = 0.0, h = 0.0;
  std::size_t num_jumps = 0;
  double G1 = 0.0, G2 = 0.0, G3 = 0.0, G4 = 0.0, G5 = 0.0, G6 = 0.0;

  static BoundConstants make(double K1, double K2, double K3, double H, double h,
                             std::size_t num_jumps);
  static BoundConstants make(const RegularityConstants& rc, double h, std::size_t num_jumps);
};

/// Corrector bound (1+G2)^#D (|e0| + tau_max/G1) exp(t G1/h).
double theoretical_bounds(const BoundConstants& c, double t, double e0, double tau_max);
/// Predictor bound at t: corrector bound times (1 + G5 χ_D(t)) exp(G4).
double predictor_bound(const BoundConstants& c, double t, double e0, double tau_max,
                       bool at_jump);
/// Right-limit bound at t: corrector bound times (1 + G3 χ_D(t)).
double right_limit_bound(const BoundConstants& c, double t, double e0, double tau_max,
                         bool at_jump);
/// Bound on |û - x| for the perturbed scheme with perturbation maxima rho (corrector),
/// rho_plus (jump update) and rho_star (predictor).
double stability_bound(const BoundConstants& c, double t, double e0, double tau_max,
                       double rho, double rho_plus, double rho_star);

/// Numerical estimates of K1..K3 and H along an exact trajectory: K1 is the largest gap,
/// K2 and K3 are sampled |∂f/∂x| at t and t⁺ by central differences over the range of x,
/// H is the largest of the Lipschitz quotients of gC, of t -> f(t, x(t)) between jumps
/// and of f∘x against g.
RegularityConstants measure_constants(const IvpSpec& spec, const Derivator& g,
                                      const Trajectory& exact);

/// Least-squares slope of log10(error) against log10(h).
double estimate_order(std::span<const double> h_values, std::span<const double> errors);

struct ConvergenceCell {
  int num_jumps = 0;
  double h = 0.0;
  bool ok = false;
  std::string failure;
  double max_e_star = 0.0;
  double max_e = 0.0;
  double max_e_plus = 0.0;
  double max_e_plus_at_jumps = 0.0;
};

using ProblemFactory = std::function<TestProblem(int num_jumps)>;

/// One cell per (num_jumps, h), ordered by jump count then h. Grid errors mark the
/// cell failed and the run continues.
std::vector<ConvergenceCell> convergence_table(const ProblemFactory& factory,
                                               std::span<const double> h_values,
                                               std::span<const int> jump_counts);

/// Header `num_jumps,h,max_e_star,max_e,max_e_plus`, values as %.4e; failed cells
/// print `failed` in the error columns.
void write_convergence_csv(std::ostream& out, std::span<const ConvergenceCell> cells);

}  // namespace stieltjes
