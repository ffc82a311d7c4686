#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace stieltjes {

using ScalarFn = std::function<double(double)>;

/// A single jump of the derivator: g(time+) - g(time) = gap.
struct Jump {
  double time = 0.0;
  double gap = 0.0;
};

/// Hölder metadata of the continuous part: |gC(x) - gC(y)| <= H |x - y|^p.
struct Regularity {
  double p = 1.0;
  double H = 1.0;
};

/// Increasing left-continuous function g on [0, T] with finitely many jumps,
/// stored as g = gC + gB where gC is continuous and gB sums the gaps strictly
/// to the left of t.
///
/// The continuous part is shifted so that g(0) = 0. Jumps must lie in (0, T)
/// and have positive gaps. Instances are immutable.
class Derivator {
 public:
  Derivator(double domain_end, ScalarFn continuous_part, std::vector<Jump> jumps,
            std::optional<Regularity> regularity = std::nullopt);

  double domain_end() const { return domain_end_; }
  std::span<const Jump> jumps() const { return jumps_; }
  std::size_t num_jumps() const { return jumps_.size(); }
  const std::optional<Regularity>& regularity() const { return regularity_; }

  /// g(t) for t in [0, T]. Does not include the gap at t itself.
  double eval(double t) const;
  /// g(t+) for t in [0, T).
  double eval_right(double t) const;
  /// Δ⁺g(t); zero unless t is exactly one of the stored jump times.
  double jump_gap(double t) const;
  bool is_jump(double t) const { return jump_gap(t) > 0.0; }

  /// gC(t), normalised so that gC(0) = 0.
  double continuous(double t) const;
  /// gB(t) = sum of gaps at jump times < t.
  double jump_part(double t) const;

  /// μ_g([a, b)) = g(b) - g(a).
  double interval_measure(double a, double b) const;

  /// Jumps with time in [a, b).
  std::span<const Jump> jumps_in(double a, double b) const;

  const ScalarFn& continuous_fn() const { return continuous_; }

 private:
  void check_domain(double t, bool closed) const;
  std::size_t count_before(double t) const;

  double domain_end_;
  ScalarFn continuous_;
  double offset_;
  std::vector<Jump> jumps_;
  std::vector<double> prefix_;  // prefix_[i] = sum of gaps of jumps_[0..i)
  std::optional<Regularity> regularity_;
};

/// Splits f along the jumps of g: f_jump(t) = Σ_{d<t} (f_right(d) - f(d)),
/// f_continuous = f - f_jump. Only meaningful when D_f ⊂ D_g.
std::pair<ScalarFn, ScalarFn> decompose_along(const Derivator& g, ScalarFn f,
                                              ScalarFn f_right);

/// Smooth step: 0 for x <= 0, 1 for x >= 1, and
/// [1 + exp(-2 alpha tan(pi/2 (2x - 1)))]^-1 in between.
ScalarFn make_phi(double alpha);

/// g(t) = t on [0, T].
Derivator make_identity_derivator(double T);

/// Three smooth ramps phi((t - 0.4 T j) / (0.2 T)), j = 0, 1, 2, plus
/// `num_jumps` unit jumps at T j / (num_jumps + 1). When snap > 0 the jump
/// times are rounded to the nearest multiple of snap so that they fall on
/// uniform grids of step snap / m.
Derivator make_test_derivator(int num_jumps, double alpha = 4.0, double T = 10.0,
                              double snap = 0.1);

/// Continuous part of the test derivator (no jumps).
ScalarFn make_ramps(double alpha, double T);

/// Silkworm life-cycle derivator: on [0, 5]
///   1/2 sqrt(4t - t^2)      0 <= t <= 2
///   1                        2 <  t <= 3
///   2 - sqrt(6t - t^2 - 8)   3 <  t <= 4
///   3                        4 <  t <= 5
/// and g(t) = 4 + g(t - 5) for t > 5. Unit jumps at 5k+4 and 5k+5.
Derivator make_silkworm_derivator(double T);

/// Silkworm g on the base period [0, 5] (left-continuous, no periodic shift).
double silkworm_base(double t);

}  // namespace stieltjes
