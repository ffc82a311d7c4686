#include "stieltjes/linear.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "stieltjes/quadrature.hpp"

namespace stieltjes {

namespace {

std::string at(double t) {
  std::ostringstream os;
  os.precision(17);
  os << "jump at t=" << t;
  return os.str();
}

double gap_or_zero(const Derivator& g, double t) {
  return t < g.domain_end() ? g.jump_gap(t) : 0.0;
}

void require_strict(double d, const Derivator& g, const char* who) {
  for (const Jump& j : g.jumps()) {
    if (!(d * j.gap < 1.0)) {
      throw std::domain_error(std::string(who) + ": d*gap >= 1 at " + at(j.time));
    }
  }
}

}  // namespace

Coefficient Coefficient::constant(double value) {
  Coefficient c;
  c.constant_ = value;
  c.fn_ = [value](double) { return value; };
  return c;
}

Coefficient Coefficient::function(ScalarFn fn) {
  if (!fn) throw std::invalid_argument("Coefficient: empty function");
  Coefficient c;
  c.fn_ = std::move(fn);
  return c;
}

AdmissibilityReport check_admissibility(const Coefficient& damping, const Derivator& g,
                                        bool strict) {
  AdmissibilityReport r;
  for (const Jump& j : g.jumps()) {
    const double prod = damping(j.time) * j.gap;
    const bool bad = strict ? !(prod < 1.0) : (prod == 1.0);
    if (bad) r.offending.push_back(j.time);
    if (prod > 1.0) r.sign_flips.push_back(j.time);
  }
  r.ok = r.offending.empty();
  return r;
}

ScalarFn hat_transform(const Coefficient& c, const Derivator& g) {
  for (const Jump& j : g.jumps()) {
    if (1.0 + c(j.time) * j.gap == 0.0) {
      throw std::domain_error("hat_transform: 1 + c*gap = 0 at " + at(j.time));
    }
  }
  return [c, g](double t) {
    const double gap = gap_or_zero(g, t);
    if (gap > 0.0) return std::log(std::abs(1.0 + c(t) * gap)) / gap;
    return c(t);
  };
}

double hat_exponential(const Coefficient& c, const Derivator& g, double t, std::size_t quad_n) {
  if (t < 0.0 || t > g.domain_end()) throw std::domain_error("hat_exponential: t outside [0,T]");
  double log_sum = 0.0;
  int flips = 0;
  for (const Jump& j : g.jumps_in(0.0, t)) {
    const double factor = 1.0 + c(j.time) * j.gap;
    if (factor == 0.0) throw std::domain_error("hat_exponential: 1 + c*gap = 0 at " + at(j.time));
    if (factor < 0.0) ++flips;
    log_sum += std::log(std::abs(factor));
  }
  double cont = 0.0;
  if (t > 0.0) {
    cont = c.is_constant() ? c.constant_value() * g.continuous(t)
                           : continuous_part_integral(c.fn(), g, 0.0, t, quad_n);
  }
  const double mag = std::exp(cont + log_sum);
  return (flips % 2 == 0) ? mag : -mag;
}

TildeCoefficients tilde_coefficients(const LinearProblem& prob, const Derivator& g, double t) {
  const double gap = gap_or_zero(g, t);
  const double d = prob.damping(t);
  const double denom = 1.0 - d * gap;
  if (denom == 0.0) throw std::domain_error("tilde_coefficients: d*gap = 1 at " + at(t));
  return {d / denom, prob.forcing(t) / denom};
}

double homogeneous_solution(double d, double x0, const Derivator& g, double t) {
  require_strict(d, g, "homogeneous_solution");
  double prod = 1.0;
  for (const Jump& j : g.jumps_in(0.0, t)) prod *= 1.0 - d * j.gap;
  return x0 * std::exp(-d * g.continuous(t)) * prod;
}

double homogeneous_solution_right(double d, double x0, const Derivator& g, double t) {
  return homogeneous_solution(d, x0, g, t) * (1.0 - d * gap_or_zero(g, t));
}

double constant_linear_solution(double d, double forcing, double x0, const Derivator& g,
                                double t) {
  const double homogeneous = homogeneous_solution(d, x0, g, t);
  if (forcing == 0.0 || t == 0.0) return homogeneous;

  const auto jumps = g.jumps_in(0.0, t);
  const double gct = g.continuous(t);
  // ∫ exp(-d (gct - gC(s))) dgC(s) over a segment with gC running from a to b.
  auto segment = [&](double a, double b) {
    if (d == 0.0) return b - a;
    return std::exp(-d * (gct - b)) * (-std::expm1(-d * (b - a))) / d;
  };

  // Walk segments from t backwards so the product over (s, t) accumulates.
  double tail = 1.0;
  double forced = 0.0;
  double upper = gct;
  for (std::size_t i = jumps.size(); i-- > 0;) {
    const Jump& j = jumps[i];
    const double gcs = g.continuous(j.time);
    forced += tail * segment(gcs, upper);
    forced += tail * std::exp(-d * (gct - gcs)) * j.gap;
    tail *= 1.0 - d * j.gap;
    upper = gcs;
  }
  forced += tail * segment(0.0, upper);
  return homogeneous + forcing * forced;
}

namespace {

struct GeneralPieces {
  double integral = 0.0;  // ∫_{[0,t)} ê(s) forcing~(s) dμ_g(s)
  double hat_exp_t = 1.0; // ê(t)
};

GeneralPieces general_pieces(const LinearProblem& prob, const Derivator& g, double t,
                             std::size_t n) {
  GeneralPieces out;
  if (t == 0.0) return out;
  const auto jumps = g.jumps_in(0.0, t);
  std::vector<double> breaks{0.0};
  for (const Jump& j : jumps) breaks.push_back(j.time);
  breaks.push_back(t);

  double log_mag = 0.0;
  double sign = 1.0;
  double integral = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p];
    const double hi = breaks[p + 1];
    if (p > 0) {
      // Atom at lo: contribution with the left value of ê, then update ê.
      const double gap = g.jump_gap(lo);
      const double d = prob.damping(lo);
      const double denom = 1.0 - d * gap;
      integral += sign * std::exp(log_mag) * (prob.forcing(lo) / denom) * gap;
      log_mag -= std::log(std::abs(denom));
      if (denom < 0.0) sign = -sign;
    }
    if (hi <= lo) continue;
    const auto panels = static_cast<std::size_t>(
        std::max(1.0, std::round(static_cast<double>(n) * (hi - lo) / t)));
    const double w = (hi - lo) / static_cast<double>(panels);
    double gc_prev = g.continuous(lo);
    double d_prev = prob.damping(lo);
    double y_prev = sign * std::exp(log_mag) * prob.forcing(lo);
    for (std::size_t i = 1; i <= panels; ++i) {
      const double s = (i == panels) ? hi : lo + w * static_cast<double>(i);
      const double gc = g.continuous(s);
      const double d = prob.damping(s);
      const double dgc = gc - gc_prev;
      log_mag += prob.damping.is_constant() ? d * dgc : 0.5 * (d_prev + d) * dgc;
      const double y = sign * std::exp(log_mag) * prob.forcing(s);
      integral += 0.5 * (y_prev + y) * dgc;
      gc_prev = gc;
      d_prev = d;
      y_prev = y;
    }
  }
  out.integral = integral;
  out.hat_exp_t = sign * std::exp(log_mag);
  return out;
}

}  // namespace

LinearValue general_linear_solution(const LinearProblem& prob, const Derivator& g, double t,
                                    std::size_t quad_n) {
  if (t < 0.0 || t > g.domain_end()) throw std::domain_error("general_linear_solution: t outside [0,T]");
  if (quad_n < 2) throw std::invalid_argument("general_linear_solution: quad_n must be >= 2");
  const AdmissibilityReport adm = check_admissibility(prob.damping, g, false);
  if (!adm.ok) {
    throw std::domain_error("general_linear_solution: d*gap = 1 at " + at(adm.offending.front()));
  }
  const GeneralPieces fine = general_pieces(prob, g, t, quad_n);
  const GeneralPieces coarse = general_pieces(prob, g, t, quad_n / 2);
  LinearValue v;
  v.value = (prob.x0 + fine.integral) / fine.hat_exp_t;
  v.error_estimate = std::abs(fine.integral - coarse.integral) / std::abs(fine.hat_exp_t);
  return v;
}

}  // namespace stieltjes
