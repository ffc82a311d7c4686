#include "stieltjes/derivator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace stieltjes {

namespace {

constexpr int kMonotoneSamples = 256;

std::string describe(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

}  // namespace

Derivator::Derivator(double domain_end, ScalarFn continuous_part,
                     std::vector<Jump> jumps, std::optional<Regularity> regularity)
    : domain_end_(domain_end),
      continuous_(std::move(continuous_part)),
      offset_(0.0),
      jumps_(std::move(jumps)),
      regularity_(regularity) {
  if (!(domain_end_ > 0.0) || !std::isfinite(domain_end_)) {
    throw std::invalid_argument("derivator: domain end T must be positive and finite");
  }
  if (!continuous_) {
    throw std::invalid_argument("derivator: continuous part is empty");
  }
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    const Jump& j = jumps_[i];
    if (!(j.time > 0.0 && j.time < domain_end_)) {
      throw std::invalid_argument("derivator: jump at t=" + describe(j.time) +
                                  " is outside the open interval (0, T)");
    }
    if (!(j.gap > 0.0) || !std::isfinite(j.gap)) {
      throw std::invalid_argument("derivator: jump at t=" + describe(j.time) +
                                  " has non-positive gap");
    }
    if (i > 0 && !(jumps_[i - 1].time < j.time)) {
      throw std::invalid_argument("derivator: jump times must be strictly increasing");
    }
  }
  if (regularity_ && (!(regularity_->p > 0.0 && regularity_->p <= 1.0) ||
                      !(regularity_->H > 0.0))) {
    throw std::invalid_argument("derivator: regularity needs p in (0,1] and H > 0");
  }

  offset_ = continuous_(0.0);
  double prev = 0.0;
  for (int i = 1; i <= kMonotoneSamples; ++i) {
    const double v = continuous_(domain_end_ * i / kMonotoneSamples) - offset_;
    if (!std::isfinite(v) || v < prev) {
      throw std::invalid_argument("derivator: continuous part is not nondecreasing");
    }
    prev = v;
  }

  prefix_.resize(jumps_.size() + 1, 0.0);
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    prefix_[i + 1] = prefix_[i] + jumps_[i].gap;
  }
}

void Derivator::check_domain(double t, bool closed) const {
  const bool ok = closed ? (t >= 0.0 && t <= domain_end_) : (t >= 0.0 && t < domain_end_);
  if (!ok) {
    throw std::domain_error("derivator: t=" + describe(t) + " outside " +
                            (closed ? "[0, T]" : "[0, T)"));
  }
}

std::size_t Derivator::count_before(double t) const {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                             [](const Jump& j, double v) { return j.time < v; });
  return static_cast<std::size_t>(it - jumps_.begin());
}

double Derivator::continuous(double t) const {
  check_domain(t, true);
  return continuous_(t) - offset_;
}

double Derivator::jump_part(double t) const {
  check_domain(t, true);
  return prefix_[count_before(t)];
}

double Derivator::eval(double t) const {
  check_domain(t, true);
  return (continuous_(t) - offset_) + prefix_[count_before(t)];
}

double Derivator::jump_gap(double t) const {
  check_domain(t, false);
  const std::size_t i = count_before(t);
  if (i < jumps_.size() && jumps_[i].time == t) return jumps_[i].gap;
  return 0.0;
}

double Derivator::eval_right(double t) const {
  check_domain(t, false);
  return eval(t) + jump_gap(t);
}

double Derivator::interval_measure(double a, double b) const {
  if (a > b) throw std::invalid_argument("interval_measure: a > b");
  return eval(b) - eval(a);
}

std::span<const Jump> Derivator::jumps_in(double a, double b) const {
  const std::size_t lo = count_before(a);
  const std::size_t hi = count_before(b);
  if (hi <= lo) return {};
  return std::span<const Jump>(jumps_).subspan(lo, hi - lo);
}

std::pair<ScalarFn, ScalarFn> decompose_along(const Derivator& g, ScalarFn f,
                                              ScalarFn f_right) {
  std::vector<Jump> steps;
  steps.reserve(g.num_jumps());
  for (const Jump& j : g.jumps()) {
    steps.push_back({j.time, f_right(j.time) - f(j.time)});
  }
  ScalarFn f_jump = [steps](double t) {
    double s = 0.0;
    for (const Jump& j : steps) {
      if (j.time >= t) break;
      s += j.gap;
    }
    return s;
  };
  ScalarFn f_continuous = [f = std::move(f), f_jump](double t) { return f(t) - f_jump(t); };
  return {std::move(f_continuous), std::move(f_jump)};
}

ScalarFn make_phi(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("make_phi: alpha must be positive");
  return [alpha](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double z = 2.0 * alpha * std::tan(std::numbers::pi / 2.0 * (2.0 * x - 1.0));
    return 1.0 / (1.0 + std::exp(-z));
  };
}

Derivator make_identity_derivator(double T) {
  return Derivator(T, [](double t) { return t; }, {}, Regularity{1.0, 1.0});
}

ScalarFn make_ramps(double alpha, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("make_ramps: T must be positive");
  ScalarFn phi = make_phi(alpha);
  const double width = 0.2 * T;
  const double pitch = 0.4 * T;
  return [phi, width, pitch](double t) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += phi((t - pitch * j) / width);
    return s;
  };
}

namespace {

// sup of phi' over (0, 1), sampled from the closed form
// phi' = s (1 - s) * 2 alpha pi sec^2(pi/2 (2x - 1)).
double phi_max_slope(double alpha) {
  double best = 0.0;
  constexpr int n = 20000;
  for (int i = 1; i < n; ++i) {
    const double x = static_cast<double>(i) / n;
    const double arg = std::numbers::pi / 2.0 * (2.0 * x - 1.0);
    const double z = 2.0 * alpha * std::tan(arg);
    const double s = 1.0 / (1.0 + std::exp(-z));
    const double c = std::cos(arg);
    const double d = s * (1.0 - s) * 2.0 * alpha * std::numbers::pi / (c * c);
    if (std::isfinite(d)) best = std::max(best, d);
  }
  return best;
}

}  // namespace

Derivator make_test_derivator(int num_jumps, double alpha, double T, double snap) {
  if (!(T > 0.0)) throw std::invalid_argument("make_test_derivator: T must be positive");
  if (num_jumps < 0) throw std::invalid_argument("make_test_derivator: num_jumps < 0");
  std::vector<Jump> jumps;
  jumps.reserve(static_cast<std::size_t>(num_jumps));
  for (int j = 1; j <= num_jumps; ++j) {
    double t = T * j / (num_jumps + 1);
    if (snap > 0.0) t = std::round(t / snap) * snap;
    jumps.push_back({t, 1.0});
  }
  const double slope = phi_max_slope(alpha) / (0.2 * T);
  return Derivator(T, make_ramps(alpha, T), std::move(jumps), Regularity{1.0, slope});
}

double silkworm_base(double t) {
  if (t <= 2.0) return 0.5 * std::sqrt(std::max(4.0 * t - t * t, 0.0));
  if (t <= 3.0) return 1.0;
  if (t <= 4.0) return 2.0 - std::sqrt(std::max(6.0 * t - t * t - 8.0, 0.0));
  return 3.0;
}

Derivator make_silkworm_derivator(double T) {
  if (!(T > 0.0)) throw std::invalid_argument("make_silkworm_derivator: T must be positive");
  // Each period (5m, 5m+5] adds 2 to the continuous part and carries two unit jumps.
  ScalarFn continuous = [](double t) {
    if (t <= 0.0) return 0.0;
    const double m = std::ceil(t / 5.0) - 1.0;
    const double s = t - 5.0 * m;
    return 2.0 * m + (s <= 4.0 ? silkworm_base(s) : 2.0);
  };
  std::vector<Jump> jumps;
  for (int k = 0;; ++k) {
    const double a = 5.0 * k + 4.0;
    const double b = 5.0 * k + 5.0;
    if (a >= T) break;
    jumps.push_back({a, 1.0});
    if (b < T) jumps.push_back({b, 1.0});
  }
  return Derivator(T, std::move(continuous), std::move(jumps),
                   Regularity{0.5, std::numbers::sqrt2});
}

}  // namespace stieltjes
