#pragma once

#include <optional>
#include <vector>

#include "stieltjes/derivator.hpp"

namespace stieltjes {

/// Coefficient of the linear equation: a function of time, optionally known
/// to be constant (enables closed forms).
class Coefficient {
 public:
  static Coefficient constant(double value);
  static Coefficient function(ScalarFn fn);

  double operator()(double t) const { return constant_ ? *constant_ : fn_(t); }
  bool is_constant() const { return constant_.has_value(); }
  double constant_value() const { return *constant_; }
  const ScalarFn& fn() const { return fn_; }

 private:
  ScalarFn fn_;
  std::optional<double> constant_;
};

/// x'_g(t) + damping(t) x(t) = forcing(t), x(0) = x0.
struct LinearProblem {
  Coefficient damping = Coefficient::constant(0.0);
  Coefficient forcing = Coefficient::constant(0.0);
  double x0 = 0.0;
};

struct AdmissibilityReport {
  bool ok = true;
  /// Jumps where the tested condition fails (d Δ⁺g = 1, or >= 1 when strict).
  std::vector<double> offending;
  /// Jumps with d Δ⁺g > 1, where the hat exponential changes sign.
  std::vector<double> sign_flips;
  /// Summability of |ln|1 - d Δ⁺g||; always true with finitely many jumps.
  bool summable = true;
};

/// Non-strict: d(t) Δ⁺g(t) != 1 at every jump. Strict: d(t) Δ⁺g(t) < 1.
AdmissibilityReport check_admissibility(const Coefficient& damping, const Derivator& g,
                                        bool strict);

/// ĉ(t) = c(t) off D_g, ln|1 + c(t) Δ⁺g(t)| / Δ⁺g(t) on D_g.
/// Throws std::domain_error if 1 + c Δ⁺g = 0 at some jump.
ScalarFn hat_transform(const Coefficient& c, const Derivator& g);

/// ê_c(t) = (-1)^k exp(∫_{[0,t)} ĉ dμ_g), k = number of jumps s < t with
/// 1 + c(s) Δ⁺g(s) < 0. Non-constant c uses quad_n trapezoid panels for the
/// continuous part.
double hat_exponential(const Coefficient& c, const Derivator& g, double t,
                       std::size_t quad_n = 100000);

struct TildeCoefficients {
  double damping = 0.0;
  double forcing = 0.0;
};

/// d̃ = d / (1 - d Δ⁺g), forcing~ = forcing / (1 - d Δ⁺g).
TildeCoefficients tilde_coefficients(const LinearProblem& prob, const Derivator& g, double t);

/// x0 exp(-d g(t)) Π_{s<t} (1 - d Δ⁺g(s)) exp(d Δ⁺g(s)). Requires d Δ⁺g < 1.
double homogeneous_solution(double d, double x0, const Derivator& g, double t);

/// Right limit x(t+) of homogeneous_solution.
double homogeneous_solution_right(double d, double x0, const Derivator& g, double t);

/// Constant-coefficient solution, homogeneous part plus
///   forcing ∫_{[0,t)} exp(d (gC(s) - gC(t))) Π_{u ∈ (s,t) ∩ D_g} (1 - d Δ⁺g(u)) dμ_g(s),
/// evaluated in closed form segment by segment. Requires d Δ⁺g < 1.
double constant_linear_solution(double d, double forcing, double x0, const Derivator& g,
                                double t);

struct LinearValue {
  double value = 0.0;
  /// |I_n - I_{n/2}| of the Stieltjes integral, scaled by ê^{-1}(t).
  double error_estimate = 0.0;
};

/// x(t) = ê_{d̃}(t)^{-1} (x0 + ∫_{[0,t)} ê_{d̃}(s) forcing~(s) dμ_g(s)). Requires d Δ⁺g != 1.
LinearValue general_linear_solution(const LinearProblem& prob, const Derivator& g, double t,
                                    std::size_t quad_n = 1000000);

}  // namespace stieltjes
