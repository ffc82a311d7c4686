#include "stieltjes/descriptor.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace stieltjes {

namespace {

using nlohmann::json;

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw std::invalid_argument(std::string("descriptor: ") + key + " must be a number");
  return j[key].get<double>();
}

ScalarFn builtin_continuous(const std::string& id, double alpha, double T) {
  if (id == "identity") return [](double t) { return t; };
  if (id == "zero") return [](double) { return 0.0; };
  if (id == "ramps") return make_ramps(alpha, T);
  if (id == "silkworm") {
    // The continuous part of the silkworm derivator: its own jumps are not included.
    const Derivator g = make_silkworm_derivator(T);
    return [g](double t) { return g.continuous(t); };
  }
  throw std::invalid_argument("descriptor: unknown continuous builtin '" + id + "'");
}

}  // namespace

Derivator derivator_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("descriptor: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw std::invalid_argument("descriptor: missing string field 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  const double T = number(j, "T", 10.0);
  const double alpha = number(j, "alpha", 4.0);

  if (kind == "identity") return make_identity_derivator(T);
  if (kind == "silkworm") return make_silkworm_derivator(T);
  if (kind == "test") {
    if (j.contains("num_jumps") && !j["num_jumps"].is_number_integer()) {
      throw std::invalid_argument("descriptor: num_jumps must be an integer");
    }
    const int n = j.value("num_jumps", 2);
    return make_test_derivator(n, alpha, T);
  }
  if (kind == "custom") {
    const std::string id = j.value("continuous", std::string("identity"));
    std::vector<Jump> jumps;
    if (j.contains("jumps")) {
      if (!j["jumps"].is_array()) throw std::invalid_argument("descriptor: jumps must be an array");
      for (const json& e : j["jumps"]) {
        if (!e.is_object() || !e.contains("t") || !e.contains("gap")) {
          throw std::invalid_argument("descriptor: each jump needs 't' and 'gap'");
        }
        jumps.push_back({number(e, "t", 0.0), number(e, "gap", 0.0)});
      }
    }
    std::sort(jumps.begin(), jumps.end(),
              [](const Jump& x, const Jump& y) { return x.time < y.time; });
    return Derivator(T, builtin_continuous(id, alpha, T), std::move(jumps));
  }
  throw std::invalid_argument("descriptor: unknown kind '" + kind + "'");
}

Derivator derivator_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("descriptor: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return derivator_from_json(ss.str());
}

}  // namespace stieltjes
