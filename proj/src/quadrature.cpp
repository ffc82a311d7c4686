#include "stieltjes/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace stieltjes {

const char* to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::OnePoint: return "onepoint";
    case RuleKind::Trapezoid: return "trapezoid";
    case RuleKind::CorrectedOnePoint: return "corrected_onepoint";
    case RuleKind::CorrectedTrapezoid: return "corrected_trapezoid";
  }
  return "unknown";
}

namespace {

void check_interval(const Derivator& g, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("quadrature: need a < b");
  if (a < 0.0 || b > g.domain_end()) throw std::domain_error("quadrature: [a,b) outside [0,T]");
}

double jump_sum(const ScalarFn& f, const Derivator& g, double a, double b) {
  double s = 0.0;
  for (const Jump& j : g.jumps_in(a, b)) s += f(j.time) * j.gap;
  return s;
}

struct Corrected {
  double jump_terms;  // Σ [f(s) Δ⁺g(s) + Δ⁺f(s) (gC(b) - gC(s))]
  double f_jumps;     // Σ Δ⁺f(s)
};

Corrected corrected_terms(const ScalarFn& f, const ScalarFn& f_right, const Derivator& g,
                          double a, double b) {
  Corrected c{0.0, 0.0};
  const double gcb = g.continuous(b);
  for (const Jump& j : g.jumps_in(a, b)) {
    const double fs = f(j.time);
    const double df = f_right(j.time) - fs;
    c.jump_terms += fs * j.gap + df * (gcb - g.continuous(j.time));
    c.f_jumps += df;
  }
  return c;
}

}  // namespace

double onepoint_rule(const ScalarFn& f, const Derivator& g, double a, double b) {
  check_interval(g, a, b);
  return f(a) * (g.continuous(b) - g.continuous(a)) + jump_sum(f, g, a, b);
}

double trapezoid_rule(const ScalarFn& f, const Derivator& g, double a, double b) {
  check_interval(g, a, b);
  return 0.5 * (f(a) + f(b)) * (g.continuous(b) - g.continuous(a)) + jump_sum(f, g, a, b);
}

double corrected_onepoint_rule(const ScalarFn& f, const ScalarFn& f_right,
                               const Derivator& g, double a, double b) {
  check_interval(g, a, b);
  const Corrected c = corrected_terms(f, f_right, g, a, b);
  return f(a) * (g.continuous(b) - g.continuous(a)) + c.jump_terms;
}

double corrected_trapezoid_rule(const ScalarFn& f, const ScalarFn& f_right,
                                const Derivator& g, double a, double b) {
  check_interval(g, a, b);
  const Corrected c = corrected_terms(f, f_right, g, a, b);
  const double fc_a = f(a);
  const double fc_b = f(b) - c.f_jumps;
  return 0.5 * (fc_a + fc_b) * (g.continuous(b) - g.continuous(a)) + c.jump_terms;
}

double apply_rule(RuleKind kind, const ScalarFn& f, const ScalarFn& f_right,
                  const Derivator& g, double a, double b) {
  switch (kind) {
    case RuleKind::OnePoint: return onepoint_rule(f, g, a, b);
    case RuleKind::Trapezoid: return trapezoid_rule(f, g, a, b);
    case RuleKind::CorrectedOnePoint: return corrected_onepoint_rule(f, f_right, g, a, b);
    case RuleKind::CorrectedTrapezoid: return corrected_trapezoid_rule(f, f_right, g, a, b);
  }
  throw std::invalid_argument("apply_rule: unknown rule");
}

double continuous_part_integral(const ScalarFn& f, const Derivator& g, double a, double b,
                                std::size_t n, const ScalarFn& f_right) {
  if (n < 1) throw std::invalid_argument("oracle_integral: n must be >= 1");
  check_interval(g, a, b);

  std::vector<double> breaks{a};
  for (const Jump& j : g.jumps_in(a, b)) {
    if (j.time > a) breaks.push_back(j.time);
  }
  breaks.push_back(b);

  double total = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p];
    const double hi = breaks[p + 1];
    const auto panels = static_cast<std::size_t>(
        std::max(1.0, std::round(static_cast<double>(n) * (hi - lo) / (b - a))));
    const double w = (hi - lo) / static_cast<double>(panels);

    // f on (lo, hi] is continuous; at lo use the right limit when lo is a jump.
    double f_prev;
    if (g.is_jump(lo)) {
      f_prev = f_right ? f_right(lo) : f(lo + 1e-12 * (hi - lo));
    } else {
      f_prev = f(lo);
    }
    double g_prev = g.continuous(lo);
    for (std::size_t i = 1; i <= panels; ++i) {
      const double s = (i == panels) ? hi : lo + w * static_cast<double>(i);
      const double f_cur = f(s);
      const double g_cur = g.continuous(s);
      total += 0.5 * (f_prev + f_cur) * (g_cur - g_prev);
      f_prev = f_cur;
      g_prev = g_cur;
    }
  }
  return total;
}

double oracle_integral(const ScalarFn& f, const Derivator& g, double a, double b,
                       std::size_t n, const ScalarFn& f_right) {
  const double cont = continuous_part_integral(f, g, a, b, n, f_right);
  return cont + jump_sum(f, g, a, b);
}

double error_bound(RuleKind kind, double H, double p, double a, double b, double var_f) {
  if (!(b > a)) throw std::invalid_argument("error_bound: need b > a");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("error_bound: p must be in (0,1]");
  const double len = b - a;
  switch (kind) {
    case RuleKind::OnePoint: return H * std::pow(len, p) * var_f;
    case RuleKind::Trapezoid: return H * std::pow(len / 2.0, p) * var_f;
    case RuleKind::CorrectedOnePoint: return H * H * len * len;
    case RuleKind::CorrectedTrapezoid: return 0.5 * H * H * len * len;
  }
  throw std::invalid_argument("error_bound: unknown rule");
}

double sampled_variation(const ScalarFn& f, double a, double b, std::size_t points) {
  if (points < 2) throw std::invalid_argument("sampled_variation: need >= 2 points");
  double var = 0.0;
  double prev = f(a);
  for (std::size_t i = 1; i < points; ++i) {
    const double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double cur = f(t);
    var += std::abs(cur - prev);
    prev = cur;
  }
  return var;
}

}  // namespace stieltjes
