#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stieltjes/quadrature.hpp"

namespace stieltjes::cli {

enum ExitCode : int {
  kOk = 0,
  kPropertyViolation = 1,
  kConfigError = 2,
  kGridError = 3,
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One randomized quadrature bound check.
struct QuadratureCase {
  std::size_t index = 0;
  RuleKind rule = RuleKind::OnePoint;
  int num_jumps = 0;
  double a = 0.0, b = 0.0;
  double value = 0.0;
  double oracle = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// `cases` random problems: a test derivator with 0-4 jumps, f = c1 g + c2 sin(g) and a
/// random [a, b), often starting on a jump. The rule cycles with the case index. H and
/// the variation of f follow from the g-Lipschitz construction of f.
std::vector<QuadratureCase> quadrature_suite(std::size_t cases, std::uint64_t seed,
                                             std::size_t oracle_n);

/// STIELTJES_SEED if set, otherwise `fallback`. Throws std::invalid_argument on garbage.
std::uint64_t resolve_seed(std::uint64_t fallback);

}  // namespace stieltjes::cli
