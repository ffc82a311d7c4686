#pragma once

#include "stieltjes/derivator.hpp"

namespace stieltjes {

enum class RuleKind { OnePoint, Trapezoid, CorrectedOnePoint, CorrectedTrapezoid };

const char* to_string(RuleKind kind);

// Single-interval rules for ∫_{[a,b)} f dμ_g. All require 0 <= a < b <= T.

/// f(a) (gC(b) - gC(a)) + Σ_{s ∈ [a,b)} f(s) Δ⁺g(s)
double onepoint_rule(const ScalarFn& f, const Derivator& g, double a, double b);

/// (f(a) + f(b)) / 2 (gC(b) - gC(a)) + Σ_{s ∈ [a,b)} f(s) Δ⁺g(s)
double trapezoid_rule(const ScalarFn& f, const Derivator& g, double a, double b);

/// Jump-corrected one-point rule. f_right(s) is f(s+); f may only jump on D_g.
///   fC(a) (gC(b) - gC(a)) + Σ_{s ∈ [a,b)} [f(s) Δ⁺g(s) + Δ⁺f(s) (gC(b) - gC(s))]
/// with the decomposition of f restricted to [a, b], so fC(a) = f(a).
double corrected_onepoint_rule(const ScalarFn& f, const ScalarFn& f_right,
                               const Derivator& g, double a, double b);

/// Jump-corrected trapezoid rule; as above with (fC(a) + fC(b)) / 2 weight.
double corrected_trapezoid_rule(const ScalarFn& f, const ScalarFn& f_right,
                                const Derivator& g, double a, double b);

double apply_rule(RuleKind kind, const ScalarFn& f, const ScalarFn& f_right,
                  const Derivator& g, double a, double b);

/// Reference value of ∫_{[a,b)} f dμ_g: exact jump sum plus a composite trapezoid
/// of f against gC on about n panels, split at the interior jumps of g. If given,
/// f_right supplies f(s+) at the start of a piece that begins on a jump;
/// otherwise f is sampled just right of the jump.
double oracle_integral(const ScalarFn& f, const Derivator& g, double a, double b,
                       std::size_t n, const ScalarFn& f_right = nullptr);

/// Composite trapezoid of f against gC only (no jump mass) on [a, b].
double continuous_part_integral(const ScalarFn& f, const Derivator& g, double a, double b,
                                std::size_t n, const ScalarFn& f_right = nullptr);

/// Error bound of each rule.
///   OnePoint            H (b-a)^p var_f
///   Trapezoid           H ((b-a)/2)^p var_f
///   CorrectedOnePoint   H^2 (b-a)^2
///   CorrectedTrapezoid  H^2 / 2 (b-a)^2
double error_bound(RuleKind kind, double H, double p, double a, double b, double var_f);

/// Σ |f(t_{i+1}) - f(t_i)| on a uniform grid of `points` nodes; a lower estimate.
double sampled_variation(const ScalarFn& f, double a, double b, std::size_t points = 10000);

}  // namespace stieltjes
