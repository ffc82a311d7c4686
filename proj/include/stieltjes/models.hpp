#pragma once

#include "stieltjes/derivator.hpp"
#include "stieltjes/solver.hpp"

namespace stieltjes {

// ---------------------------------------------------------------------------
// Linear benchmark: x'_g + d x = forcing over an arbitrary derivator.
// ---------------------------------------------------------------------------

/// A problem with its exact solution x(t) and right limit x(t+).
struct TestProblem {
  Derivator g;
  IvpSpec spec;
  ScalarFn exact;
  ScalarFn exact_right;
};

using LinearBenchmark = TestProblem;

/// Constant-coefficient problem on g with its closed-form solution.
/// Requires d Δ⁺g < 1 at every jump.
LinearBenchmark make_linear_benchmark(Derivator g, double d, double x0, double forcing = 0.0);

/// The same on the test derivator with `num_jumps` unit jumps.
LinearBenchmark make_linear_benchmark(int num_jumps, double d, double x0, double alpha = 4.0,
                                      double T = 10.0);

// ---------------------------------------------------------------------------
// Silkworm population: worms/cocoons/moths on (5k, 5k+4], eggs on (5k+4, 5k+5].
// ---------------------------------------------------------------------------

struct SilkwormParams {
  double c = 1.2;       // decay
  double lambda = 1.1;  // fecundity
  double x0 = 8.0;
  double T = 10.0;

  void validate() const;
};

/// Right-hand side at a grid node t = k h of `history`:
///   -c x                          t ∈ (5k, 5k+4)
///   -x                            t = 5k+4
///   λ ∫_{t-5}^{t-1} x(s) ds       t = 5(k+1)
/// The hatch integral is a composite trapezoid over the stored node values.
double silkworm_rhs(double t, double x, const Trajectory& history, const SilkwormParams& params);

/// f(t+, x): the -c x branch everywhere.
double silkworm_rhs_right(double t, double x, const SilkwormParams& params);

IvpSpec make_silkworm_spec(const SilkwormParams& params);

/// Closed-form solution. Generation m lives on (5m, 5m+4] with amplitude
/// A_m = λ ∫ x over generation m-1; J = ∫_0^4 exp(-c g(s)) ds is computed by
/// composite Simpson after removing the sqrt endpoint singularities.
class SilkwormSolution {
 public:
  explicit SilkwormSolution(const SilkwormParams& params, std::size_t resolution = 1000);

  double operator()(double t) const;
  double right(double t) const;

  /// ∫_0^4 exp(-c g(s)) ds.
  double generation_integral() const { return generation_integral_; }
  double amplitude(int generation) const;

 private:
  SilkwormParams params_;
  double generation_integral_;
};

double silkworm_exact(double t, const SilkwormParams& params, std::size_t resolution = 1000);

/// Derivator, spec and exact solution bundled for the analysis harness.
TestProblem make_silkworm_problem(const SilkwormParams& params);

}  // namespace stieltjes
