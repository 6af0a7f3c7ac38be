#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bochner/chart.hpp"
#include "bochner/conditions.hpp"
#include "bochner/structure.hpp"

namespace bochner {

enum class Status { pass, fail, skip, info };

std::string_view to_string(Status s);
Status status_from_string(std::string_view s);

/// Pinned tolerances. Pointwise checks on the fd backend use fd1/fd2/fd3 by the
/// number of nested derivatives the check takes; sized for truncation at
/// h = 1e-4 within 0.1 of a coordinate pole.
struct Tolerances {
  double analytic = 1e-10;
  double fd1 = 1e-4;
  double fd2 = 5e-4;
  double fd3 = 2e-3;
  double quadrature = 1e-6;
  double weitzenbock = 1e-8;
  double bochner = 1e-8;
  double frak_k = 1e-12;
  double classical_analytic = 1e-10;
  double classical_fd = 1e-4;
  double methods = 1e-10;
  double negative_control = 1e-3;
  double convergence_order = 1.8;
  /// Per-check overrides keyed by check name.
  std::map<std::string, double> overrides;
};

struct Scenario {
  std::string fixture;
  NamedSpec p;
  NamedSpec k;
  int grid = 0;         // pointwise samples per dimension; 0 picks 32 (n <= 2) or 8
  int quad_grid = 128;  // quadrature nodes per dimension for 2D fixtures
  Backend backend = Backend::analytic;
  std::vector<int> degrees;  // form degrees; empty means 1..n
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerance_overrides;

  std::string label() const;
};

/// "fixture:P-spec:K-spec"; colons inside parentheses do not split.
Scenario parse_scenario(const std::string& shorthand);

struct Config {
  std::vector<Scenario> scenarios;
  std::string format = "text";
  std::string out;
  std::uint64_t seed = 1;
  Tolerances tolerances;
};

/// Parses a JSON config; throws Error(config) naming the offending key.
Config parse_config(const std::string& json_text);
Config load_config(const std::string& path);

/// Resolves names against the registries before anything runs.
void validate(const Scenario& s, const ManifoldRegistry& reg);

struct CheckResult {
  std::string name;
  std::string anchor;
  std::vector<std::string> hypotheses;
  double residual = 0.0;  // NaN when not evaluated
  double tolerance = 0.0;
  Status status = Status::pass;
  Witness witness;
  std::string note;
};

struct ScenarioReport {
  std::string scenario;
  std::vector<CheckResult> checks;
  double runtime_s = 0.0;  // metadata only
};

struct SuiteReport {
  std::map<std::string, std::string> meta;
  std::vector<ScenarioReport> scenarios;

  int count(Status s) const;
  bool any_failed() const { return count(Status::fail) > 0; }
};

struct CatalogCheck {
  std::string name;
  std::string anchor;
  std::string stage;
  std::string summary;
};

/// Every check the suite can emit, in run order.
const std::vector<CatalogCheck>& check_catalog();
const CatalogCheck* find_check(std::string_view name);

ScenarioReport run_scenario(const Scenario& s, const Tolerances& tol, const ManifoldRegistry& reg);

/// Runs all scenarios, in parallel up to BOCHNERLAB_THREADS (default 1);
/// the report keeps config order.
SuiteReport run_suite(const Config& cfg, const ManifoldRegistry& reg = ManifoldRegistry::builtin());

/// Worker count from BOCHNERLAB_THREADS, clamped to [1, 64].
int thread_count();

}  // namespace bochner
