#include "stieltjes/models.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "stieltjes/linear.hpp"

namespace stieltjes {

LinearBenchmark make_linear_benchmark(Derivator g, double d, double x0, double forcing) {
  const AdmissibilityReport adm = check_admissibility(Coefficient::constant(d), g, true);
  if (!adm.ok) throw std::domain_error("linear benchmark: d*gap >= 1 at some jump");

  IvpSpec spec = make_autonomous_spec(
      [d, forcing](double, double x) { return forcing - d * x; }, x0);
  spec.constants = RegularityConstants{0.0, std::abs(d), std::abs(d), 0.0};
  if (g.num_jumps() > 0) {
    double k1 = 0.0;
    for (const Jump& j : g.jumps()) k1 = std::max(k1, j.gap);
    spec.constants->K1 = k1;
  }

  ScalarFn exact = [g, d, x0, forcing](double t) {
    return constant_linear_solution(d, forcing, x0, g, t);
  };
  ScalarFn exact_right = [g, d, forcing, exact](double t) {
    const double x = exact(t);
    if (t >= g.domain_end()) return x;
    return x + g.jump_gap(t) * (forcing - d * x);
  };
  return LinearBenchmark{std::move(g), std::move(spec), std::move(exact), std::move(exact_right)};
}

LinearBenchmark make_linear_benchmark(int num_jumps, double d, double x0, double alpha, double T) {
  return make_linear_benchmark(make_test_derivator(num_jumps, alpha, T), d, x0);
}

void SilkwormParams::validate() const {
  if (!(c > 0.0)) throw std::invalid_argument("silkworm: c must be positive");
  if (!(lambda >= 0.0)) throw std::invalid_argument("silkworm: lambda must be nonnegative");
  if (!std::isfinite(x0)) throw std::invalid_argument("silkworm: x0 must be finite");
  if (!(T > 0.0)) throw std::invalid_argument("silkworm: T must be positive");
}

namespace {

struct NodeIndex {
  long long k;
  long long period;  // nodes per 5 time units
  long long moth;    // nodes per 4 time units
  long long unit;    // nodes per time unit
};

NodeIndex node_index(double t, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("silkworm_rhs: history has no step size");
  const double per_unit = 1.0 / h;
  const long long unit = std::llround(per_unit);
  if (unit < 1 || std::abs(per_unit - static_cast<double>(unit)) > 1e-9 * per_unit) {
    throw std::invalid_argument("silkworm_rhs: 1/h must be an integer");
  }
  return {std::llround(t / h), 5 * unit, 4 * unit, unit};
}

}  // namespace

double silkworm_rhs(double t, double x, const Trajectory& history, const SilkwormParams& params) {
  const NodeIndex n = node_index(t, history.h);
  const long long phase = n.k % n.period;
  if (n.k > 0 && phase == 0) {
    const long long hi = n.k - n.unit;
    const long long lo = std::max(0LL, n.k - n.period);
    if (hi < lo) return 0.0;
    if (static_cast<long long>(history.values.size()) <= hi) {
      throw std::invalid_argument("silkworm_rhs: history does not cover the delay window");
    }
    double s = 0.0;
    for (long long i = lo; i <= hi; ++i) s += history.values[static_cast<std::size_t>(i)];
    s -= 0.5 * (history.values[static_cast<std::size_t>(lo)] +
                history.values[static_cast<std::size_t>(hi)]);
    return params.lambda * history.h * s;
  }
  if (phase == n.moth) return -x;
  return -params.c * x;
}

double silkworm_rhs_right(double, double x, const SilkwormParams& params) {
  return -params.c * x;
}

IvpSpec make_silkworm_spec(const SilkwormParams& params) {
  params.validate();
  IvpSpec spec;
  spec.rhs = [params](double t, double x, const Trajectory& hist) {
    return silkworm_rhs(t, x, hist, params);
  };
  spec.rhs_right = [params](double t, double x, const Trajectory&) {
    return silkworm_rhs_right(t, x, params);
  };
  spec.x0 = params.x0;
  return spec;
}

namespace {

template <class F>
double simpson(F&& f, double a, double b, std::size_t panels) {
  if (panels % 2) ++panels;
  const double w = (b - a) / static_cast<double>(panels);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) {
    s += (i % 2 ? 4.0 : 2.0) * f(a + w * static_cast<double>(i));
  }
  return s * w / 3.0;
}

// Simpson refined until the Richardson estimate |S_n - S_{n/2}| / 15 <= 1e-10.
template <class F>
double simpson_checked(F&& f, double a, double b, std::size_t panels) {
  panels = std::max<std::size_t>(panels + panels % 2, 4);
  double coarse = simpson(f, a, b, panels / 2 + (panels / 2) % 2);
  for (int iter = 0; iter < 20; ++iter) {
    const double fine = simpson(f, a, b, panels);
    if (std::abs(fine - coarse) / 15.0 <= 1e-10) return fine;
    coarse = fine;
    panels *= 2;
  }
  throw std::runtime_error("silkworm: generation integral did not converge");
}

}  // namespace

SilkwormSolution::SilkwormSolution(const SilkwormParams& params, std::size_t resolution)
    : params_(params) {
  params_.validate();
  if (resolution < 2) throw std::invalid_argument("silkworm: resolution must be >= 2");
  const double c = params_.c;
  constexpr double quarter = std::numbers::pi / 2.0;
  // [0,2]: t = 2 - 2cos(th), g = sin(th), dt = 2 sin(th) dth.
  const double worms = simpson_checked(
      [c](double th) { return std::exp(-c * std::sin(th)) * 2.0 * std::sin(th); }, 0.0, quarter,
      2 * resolution);
  // (2,3]: g = 1.
  const double cocoons = std::exp(-c);
  // (3,4]: t = 3 + sin(th), g = 2 - cos(th), dt = cos(th) dth.
  const double moths = simpson_checked(
      [c](double th) { return std::exp(-c * (2.0 - std::cos(th))) * std::cos(th); }, 0.0,
      quarter, resolution);
  generation_integral_ = worms + cocoons + moths;
}

double SilkwormSolution::amplitude(int generation) const {
  double a = params_.x0;
  for (int m = 0; m < generation; ++m) a = params_.lambda * a * generation_integral_;
  return a;
}

double SilkwormSolution::operator()(double t) const {
  if (t < 0.0 || t > params_.T) throw std::domain_error("silkworm_exact: t outside [0,T]");
  if (t <= 4.0) return params_.x0 * std::exp(-params_.c * silkworm_base(t));
  if (t <= 5.0) return 0.0;
  const int m = static_cast<int>(std::ceil(t / 5.0)) - 1;
  const double s = t - 5.0 * m;
  if (s > 4.0) return 0.0;
  return amplitude(m) * std::exp(-params_.c * silkworm_base(s));
}

double SilkwormSolution::right(double t) const {
  if (t < 0.0 || t > params_.T) throw std::domain_error("silkworm_exact: t outside [0,T]");
  const double r = std::fmod(t, 5.0);
  if (t > 0.0 && r == 0.0) return amplitude(static_cast<int>(std::llround(t / 5.0)));
  if (r == 4.0) return 0.0;
  return (*this)(t);
}

double silkworm_exact(double t, const SilkwormParams& params, std::size_t resolution) {
  return SilkwormSolution(params, resolution)(t);
}

TestProblem make_silkworm_problem(const SilkwormParams& params) {
  auto sol = std::make_shared<const SilkwormSolution>(params);
  return TestProblem{make_silkworm_derivator(params.T), make_silkworm_spec(params),
                     [sol](double t) { return (*sol)(t); },
                     [sol](double t) { return sol->right(t); }};
}

}  // namespace stieltjes
