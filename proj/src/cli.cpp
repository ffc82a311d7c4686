#include "stieltjes/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "stieltjes/analysis.hpp"
#include "stieltjes/descriptor.hpp"
#include "stieltjes/models.hpp"

namespace stieltjes::cli {

namespace {

using nlohmann::json;

std::string sci(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits, v);
  return buf;
}

// Writes to `path`, or to `fallback` when the path is empty.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw std::invalid_argument("cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void require_positive(const std::vector<double>& hs) {
  if (hs.empty()) throw std::invalid_argument("at least one h value is required");
  for (double h : hs) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("h values must be positive");
  }
}

// ---------------------------------------------------------------------------

struct LinearOptions {
  std::vector<int> jumps{2, 4, 6, 8, 10};
  std::vector<double> hs{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  double d = -0.5;
  double x0 = 1.0;
  double alpha = 4.0;
  double T = 10.0;
  std::string derivator;
  std::string out;
  std::string format = "csv";
};

std::optional<double> order_of(const std::vector<ConvergenceCell>& cells, int nj,
                               double ConvergenceCell::*field) {
  std::vector<double> h, e;
  for (const ConvergenceCell& c : cells) {
    if (c.ok && c.num_jumps == nj && c.*field > 0.0) {
      h.push_back(c.h);
      e.push_back(c.*field);
    }
  }
  if (h.size() < 2) return std::nullopt;
  return estimate_order(h, e);
}

int run_linear_convergence(const LinearOptions& o, std::ostream& out, std::ostream& err) {
  require_positive(o.hs);
  ProblemFactory factory;
  std::vector<int> jumps = o.jumps;
  if (!o.derivator.empty()) {
    const Derivator g = derivator_from_file(o.derivator);
    factory = [g, d = o.d, x0 = o.x0](int) { return make_linear_benchmark(g, d, x0); };
    jumps = {static_cast<int>(g.num_jumps())};
  } else {
    for (int n : jumps) {
      if (n < 0) throw std::invalid_argument("--jumps values must be >= 0");
    }
    factory = [o](int n) { return make_linear_benchmark(n, o.d, o.x0, o.alpha, o.T); };
  }

  const std::vector<ConvergenceCell> cells = convergence_table(factory, o.hs, jumps);

  Output sink(o.out, out);
  std::ostream& log = sink.to_file() ? out : err;
  json orders = json::array();
  for (int nj : jumps) {
    const auto es = order_of(cells, nj, &ConvergenceCell::max_e_star);
    const auto e = order_of(cells, nj, &ConvergenceCell::max_e);
    const auto ep = order_of(cells, nj, &ConvergenceCell::max_e_plus);
    auto show = [](const std::optional<double>& v) {
      char buf[32];
      if (!v) return std::string("n/a");
      std::snprintf(buf, sizeof buf, "%.3f", *v);
      return std::string(buf);
    };
    log << "order num_jumps=" << nj << " e_star=" << show(es) << " e=" << show(e)
        << " e_plus=" << show(ep) << '\n';
    json row = {{"num_jumps", nj}};
    row["e_star"] = es ? json(*es) : json(nullptr);
    row["e"] = e ? json(*e) : json(nullptr);
    row["e_plus"] = ep ? json(*ep) : json(nullptr);
    orders.push_back(row);
  }

  if (o.format == "json") {
    json rows = json::array();
    for (const ConvergenceCell& c : cells) {
      json r = {{"num_jumps", c.num_jumps}, {"h", c.h}, {"ok", c.ok}};
      if (c.ok) {
        r["max_e_star"] = c.max_e_star;
        r["max_e"] = c.max_e;
        r["max_e_plus"] = c.max_e_plus;
        r["max_e_plus_at_jumps"] = c.max_e_plus_at_jumps;
      } else {
        r["failure"] = c.failure;
      }
      rows.push_back(r);
    }
    *sink << json{{"rows", rows}, {"orders", orders}}.dump(2) << '\n';
  } else {
    write_convergence_csv(*sink, cells);
  }

  for (const ConvergenceCell& c : cells) {
    if (!c.ok) {
      err << "error: " << c.failure << '\n';
      return kGridError;
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct SilkwormOptions {
  double h = 1e-2;
  double T = 10.0;
  double lambda = 1.1;
  double c = 1.2;
  double x0 = 8.0;
  std::string out;
};

int run_silkworm(const SilkwormOptions& o, std::ostream& out, std::ostream&) {
  require_positive({o.h});
  SilkwormParams params{o.c, o.lambda, o.x0, o.T};
  const TestProblem prob = make_silkworm_problem(params);
  const Partition part = build_partition(prob.g, o.h);
  const Trajectory u = solve(prob.spec, prob.g, part);
  const ErrorReport r = error_report(u, prob.exact, prob.exact_right, prob.g, prob.spec);

  if (!o.out.empty()) {
    Output sink(o.out, out);
    *sink << "t,numeric,exact,error\n";
    char buf[128];
    for (std::size_t k = 0; k < u.nodes.size(); ++k) {
      const double x = u.values[k] - r.e[k];
      std::snprintf(buf, sizeof buf, "%.10g,%.10e,%.10e,%.10e\n", u.nodes[k], u.values[k], x,
                    std::abs(r.e[k]));
      *sink << buf;
    }
  }
  out << "h,max_abs_error\n" << sci(o.h) << ',' << sci(r.max_e) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct QuadratureOptions {
  std::size_t cases = 200;
  std::uint64_t seed = kDefaultSeed;
  double n = 1e6;  // accepts 1e6-style input
  std::string out;
};

int run_quadrature_check(const QuadratureOptions& o, std::ostream& out, std::ostream& err) {
  if (!(o.n >= 1.0) || o.n != std::floor(o.n) || o.n > 1e9) {
    throw std::invalid_argument("--n must be an integer in [1, 1e9]");
  }
  const std::uint64_t seed = resolve_seed(o.seed);
  const std::vector<QuadratureCase> cases = quadrature_suite(o.cases, seed, static_cast<std::size_t>(o.n));

  Output sink(o.out, out);
  std::ostream& log = sink.to_file() ? out : err;
  *sink << "# seed=" << seed << '\n' << "case,rule,value,oracle,bound,pass\n";
  std::size_t failures = 0;
  char buf[192];
  for (const QuadratureCase& c : cases) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%.10e,%.10e,%.6e,%d\n", c.index, to_string(c.rule),
                  c.value, c.oracle, c.bound, c.pass ? 1 : 0);
    *sink << buf;
    if (!c.pass) ++failures;
  }
  log << "cases=" << cases.size() << " failures=" << failures << '\n';
  return failures == 0 ? kOk : kPropertyViolation;
}

// ---------------------------------------------------------------------------

struct BoundsOptions {
  std::optional<double> K1, K2, K3, H, tau;
  double h = 1e-2;
  std::size_t num_jumps = 0;
  std::optional<double> t;
  double e0 = 0.0;
  bool measure = false;
  int jumps = 2;
  double d = -0.5;
  double x0 = 1.0;
  double alpha = 4.0;
  double T = 10.0;
  std::string derivator;
  std::string format = "json";
  std::string out;
};

int run_bounds(const BoundsOptions& o, std::ostream& out, std::ostream& err) {
  require_positive({o.h});
  json doc;
  bool holds = true;
  BoundConstants c;
  double t = 0.0, e0 = o.e0, tau = 0.0;
  bool at_jump = false;

  if (o.measure) {
    const TestProblem prob = o.derivator.empty()
                                 ? make_linear_benchmark(o.jumps, o.d, o.x0, o.alpha, o.T)
                                 : make_linear_benchmark(derivator_from_file(o.derivator), o.d,
                                                         o.x0);
    const Partition part = build_partition(prob.g, o.h);
    const Trajectory x = exact_trajectory(prob.exact, prob.exact_right, prob.g, prob.spec, part);
    const RegularityConstants rc = measure_constants(prob.spec, prob.g, x);
    const TruncationErrors te =
        truncation_errors(prob.exact, prob.exact_right, prob.g, prob.spec, part);
    const Trajectory u = solve(prob.spec, prob.g, part);
    const ErrorReport r = error_report(u, prob.exact, prob.exact_right, prob.g, prob.spec);
    c = BoundConstants::make(rc, o.h, prob.g.num_jumps());
    t = o.t.value_or(part.T);
    e0 = r.e[0];
    tau = te.max_abs_tau();
    at_jump = t < prob.g.domain_end() && prob.g.is_jump(t);

    const double H2h2 = rc.H * rc.H * o.h * o.h;
    const double lim_tau = 0.5 * H2h2 + 0.5 * rc.K2 * rc.H * H2h2 * o.h;
    const double bound = theoretical_bounds(c, part.T, e0, tau);
    doc["measured"] = {
        {"max_e", r.max_e},
        {"max_sigma_star", te.max_abs_sigma_star()},
        {"max_sigma", te.max_abs_sigma()},
        {"max_tau", tau},
        {"sigma_star_limit", H2h2},
        {"sigma_limit", 0.5 * H2h2},
        {"tau_limit", lim_tau},
        {"global_bound_at_T", bound},
    };
    holds = r.max_e <= bound && te.max_abs_sigma_star() <= H2h2 &&
            te.max_abs_sigma() <= 0.5 * H2h2 && tau <= lim_tau;
    doc["holds"] = holds;
  } else {
    if (!o.K1 || !o.K2 || !o.K3 || !o.H || !o.tau) {
      throw std::invalid_argument("bounds: give --K1 --K2 --K3 --H --tau, or use --measure");
    }
    c = BoundConstants::make(*o.K1, *o.K2, *o.K3, *o.H, o.h, o.num_jumps);
    t = o.t.value_or(o.T);
    tau = *o.tau;
  }

  doc["constants"] = {{"K1", c.K1}, {"K2", c.K2}, {"K3", c.K3}, {"H", c.H},
                      {"h", c.h},   {"num_jumps", c.num_jumps}};
  doc["G"] = {{"G1", c.G1}, {"G2", c.G2}, {"G3", c.G3},
              {"G4", c.G4}, {"G5", c.G5}, {"G6", c.G6}};
  doc["t"] = t;
  doc["bounds"] = {{"corrector", theoretical_bounds(c, t, e0, tau)},
                   {"predictor", predictor_bound(c, t, e0, tau, at_jump)},
                   {"right_limit", right_limit_bound(c, t, e0, tau, at_jump)}};

  Output sink(o.out, out);
  if (o.format == "json") {
    *sink << doc.dump(2) << '\n';
  } else {
    *sink << "quantity,value\n";
    for (const char* group : {"constants", "G", "bounds", "measured"}) {
      if (!doc.contains(group)) continue;
      for (const auto& [k, v] : doc[group].items()) {
        *sink << k << ',' << (v.is_number_float() ? sci(v.get<double>()) : v.dump()) << '\n';
      }
    }
    if (doc.contains("holds")) *sink << "holds," << (holds ? 1 : 0) << '\n';
  }
  if (!holds) {
    err << "error: measured errors exceed the theoretical bounds\n";
    return kPropertyViolation;
  }
  return kOk;
}

template <class F>
int guarded(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const GridError& e) {
    err << "error: " << e.what() << '\n';
    return kGridError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace

std::uint64_t resolve_seed(std::uint64_t fallback) {
  const char* env = std::getenv("STIELTJES_SEED");
  if (!env || !*env) return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("STIELTJES_SEED is not an integer: ") + env);
  }
}

std::vector<QuadratureCase> quadrature_suite(std::size_t cases, std::uint64_t seed,
                                             std::size_t oracle_n) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> jumps_dist(0, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double T = 10.0;
  constexpr RuleKind rules[] = {RuleKind::OnePoint, RuleKind::Trapezoid,
                                RuleKind::CorrectedOnePoint, RuleKind::CorrectedTrapezoid};

  std::vector<QuadratureCase> out;
  out.reserve(cases);
  for (std::size_t i = 0; i < cases; ++i) {
    QuadratureCase qc;
    qc.index = i;
    qc.rule = rules[i % 4];
    qc.num_jumps = jumps_dist(rng);
    const double alpha = 2.0 + 4.0 * unit(rng);
    const double c1 = -2.0 + 4.0 * unit(rng);
    const double c2 = -2.0 + 4.0 * unit(rng);
    const Derivator g = make_test_derivator(qc.num_jumps, alpha, T);

    const bool on_jump = qc.num_jumps > 0 && unit(rng) < 0.4;
    if (on_jump) {
      const auto pick = static_cast<std::size_t>(unit(rng) * static_cast<double>(g.num_jumps()));
      qc.a = g.jumps()[std::min(pick, g.num_jumps() - 1)].time;
    } else {
      qc.a = 9.5 * unit(rng);
    }
    qc.b = std::min(T, qc.a + 0.01 + 1.99 * unit(rng));

    const ScalarFn f = [g, c1, c2](double t) {
      const double v = g.eval(t);
      return c1 * v + c2 * std::sin(v);
    };
    const ScalarFn f_right = [g, c1, c2](double t) {
      const double v = t < g.domain_end() ? g.eval_right(t) : g.eval(t);
      return c1 * v + c2 * std::sin(v);
    };

    // f is g-Lipschitz with constant Hf, so Var f <= Hf mu_g([a,b)) and fC is
    // Lipschitz in t with constant Hf Lip(gC).
    const double Hf = std::abs(c1) + std::abs(c2);
    const double Lg = g.regularity() ? g.regularity()->H : 1.0;
    const double H = Lg * std::max(1.0, Hf);
    const double var_f = Hf * g.interval_measure(qc.a, qc.b);

    qc.value = apply_rule(qc.rule, f, f_right, g, qc.a, qc.b);
    qc.oracle = oracle_integral(f, g, qc.a, qc.b, oracle_n, f_right);
    qc.bound = error_bound(qc.rule, H, 1.0, qc.a, qc.b, var_f);
    // Slack for the oracle's own discretisation and rounding error.
    const double slack = 1e-9 * (1.0 + std::abs(qc.oracle));
    qc.pass = std::abs(qc.value - qc.oracle) <= qc.bound + slack;
    out.push_back(qc);
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Predictor-corrector experiments for Stieltjes differential equations",
               "stieltjes"};
  // `--h` is the step size, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  LinearOptions lin;
  auto* lc = app.add_subcommand("linear-convergence", "Convergence table of the linear test");
  lc->add_option("--jumps", lin.jumps, "Jump counts of the test derivator")->delimiter(',');
  lc->add_option("--h", lin.hs, "Step sizes")->delimiter(',');
  lc->add_option("--d", lin.d, "Damping coefficient");
  lc->add_option("--x0", lin.x0, "Initial value");
  lc->add_option("--alpha", lin.alpha, "Ramp steepness of the test derivator");
  lc->add_option("--T", lin.T, "Final time");
  lc->add_option("--derivator", lin.derivator, "JSON derivator descriptor (replaces --jumps)");
  lc->add_option("--out", lin.out, "Output file (default stdout)");
  lc->add_option("--format", lin.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  SilkwormOptions silk;
  auto* sc = app.add_subcommand("silkworm", "Silkworm population model against its exact solution");
  sc->add_option("--h", silk.h, "Step size");
  sc->add_option("--T", silk.T, "Final time");
  sc->add_option("--lambda", silk.lambda, "Fecundity");
  sc->add_option("--c", silk.c, "Decay rate");
  sc->add_option("--x0", silk.x0, "Initial population");
  sc->add_option("--out", silk.out, "CSV series t,numeric,exact,error");

  QuadratureOptions quad;
  auto* qc = app.add_subcommand("quadrature-check", "Randomized quadrature bound suite");
  qc->add_option("--cases", quad.cases, "Number of cases");
  qc->add_option("--seed", quad.seed, "RNG seed (STIELTJES_SEED overrides)");
  qc->add_option("--n", quad.n, "Oracle panels");
  qc->add_option("--out", quad.out, "Output file (default stdout)");

  BoundsOptions bo;
  auto* bc = app.add_subcommand("bounds", "Error-propagation constants and global bounds");
  bc->add_option("--K1", bo.K1);
  bc->add_option("--K2", bo.K2);
  bc->add_option("--K3", bo.K3);
  bc->add_option("--H", bo.H);
  bc->add_option("--tau", bo.tau, "Max local truncation error");
  bc->add_option("--h", bo.h, "Step size");
  bc->add_option("--num-jumps", bo.num_jumps);
  bc->add_option("--t", bo.t, "Time at which to evaluate the bounds (default T)");
  bc->add_option("--e0", bo.e0, "Initial error");
  bc->add_flag("--measure", bo.measure, "Measure constants on the linear test");
  bc->add_option("--jumps", bo.jumps, "Jump count of the test derivator (with --measure)");
  bc->add_option("--d", bo.d);
  bc->add_option("--x0", bo.x0);
  bc->add_option("--alpha", bo.alpha);
  bc->add_option("--T", bo.T);
  bc->add_option("--derivator", bo.derivator, "JSON derivator descriptor (with --measure)");
  bc->add_option("--format", bo.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  bc->add_option("--out", bo.out);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kConfigError;
  }

  if (lc->parsed()) return guarded([&] { return run_linear_convergence(lin, out, err); }, err);
  if (sc->parsed()) return guarded([&] { return run_silkworm(silk, out, err); }, err);
  if (qc->parsed()) return guarded([&] { return run_quadrature_check(quad, out, err); }, err);
  if (bc->parsed()) return guarded([&] { return run_bounds(bo, out, err); }, err);
  return kConfigError;
}

}  // namespace stieltjes::cli
