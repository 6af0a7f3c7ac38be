// bochnerlab: run verification suites, list registries, evaluate operators.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bochner/conditions.hpp"
#include "bochner/curvature.hpp"
#include "bochner/report.hpp"
#include "bochner/verification.hpp"
#include "field_spec.hpp"

using namespace bochner;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_point(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw Error(ErrorKind::config, "bad point coordinate '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

void print_tensor(const Tensor<double>& t) {
  const int n = t.n();
  std::cout.precision(12);
  if (t.rank() == 0) {
    std::cout << t() << "\n";
  } else if (t.rank() == 1) {
    for (int a = 0; a < n; ++a) std::cout << (a ? " " : "") << t(a);
    std::cout << "\n";
  } else if (t.rank() == 2) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) std::cout << (b ? " " : "") << t(a, b);
      std::cout << "\n";
    }
  } else {
    for (std::size_t i = 0; i < t.size(); ++i) std::cout << (i ? " " : "") << t[i];
    std::cout << "\n";
  }
}

int cmd_verify(const std::string& config_path, const std::vector<std::string>& scenarios, int grid,
               const std::string& backend, long long seed, const std::string& format, const std::string& out) {
  Config cfg;
  if (!config_path.empty()) cfg = load_config(config_path);
  for (const auto& s : scenarios) cfg.scenarios.push_back(parse_scenario(s));
  if (config_path.empty() && scenarios.empty()) throw Error(ErrorKind::config, "pass --config or --scenario");
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (!format.empty()) cfg.format = format;
  if (!out.empty()) cfg.out = out;
  for (auto& s : cfg.scenarios) {
    if (grid > 0) s.grid = grid;
    if (!backend.empty()) s.backend = backend_from_string(backend);
    if (seed >= 0) s.seed = cfg.seed;
  }
  if (cfg.format != "text" && cfg.format != "json") throw Error(ErrorKind::config, "format must be text or json");

  const SuiteReport rep = run_suite(cfg);
  const std::string body = cfg.format == "json" ? report_to_json(rep) : report_to_text(rep);
  if (cfg.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(cfg.out);
    if (!f) throw Error(ErrorKind::config, "cannot write " + cfg.out);
    f << body;
  }
  if (!rep.any_failed()) return 0;
  for (const auto& s : rep.scenarios)
    for (const auto& c : s.checks)
      if (c.status == Status::fail) std::cerr << "FAIL " << s.scenario << " " << c.name << " [" << c.anchor << "]\n";
  return kExitFail;
}

int cmd_list(const std::string& what) {
  if (what == "fixtures") {
    const auto names = ManifoldRegistry::builtin().names();
    for (std::size_t i = 0; i < names.size(); ++i) std::cout << (i ? ", " : "") << names[i];
    std::cout << "\n";
  } else if (what == "structures") {
    for (const auto& e : p_catalog()) std::cout << e.name << e.params << "  " << e.summary << "\n";
    for (const auto& e : k_catalog()) std::cout << e.name << e.params << "  " << e.summary << "\n";
  } else if (what == "checks") {
    for (const auto& c : check_catalog())
      std::cout << c.stage << "  " << c.name << "  [" << c.anchor << "]  " << c.summary << "\n";
  } else {
    throw Error(ErrorKind::config, "list takes fixtures, structures or checks");
  }
  return 0;
}

int cmd_eval(const std::string& op, const std::string& fixture, const std::string& structure,
             const std::string& point, const std::string& field, const std::string& field2, const std::string& backend) {
  const ManifoldRegistry reg = ManifoldRegistry::builtin();
  if (!reg.contains(fixture)) throw Error(ErrorKind::config, "unknown fixture '" + fixture + "'");
  const Manifold& m = reg.get(fixture);
  const Scenario sc = parse_scenario(fixture + ":" + structure);
  Diff diff{backend.empty() ? Backend::analytic : backend_from_string(backend)};
  const PStructure ps = make_structure(m, sc.p, sc.k, diff);
  const Geometry geo(m, ps, diff);

  const auto coords = parse_point(point);
  if (static_cast<int>(coords.size()) != m.dim)
    throw Error(ErrorKind::config, "point needs " + std::to_string(m.dim) + " coordinates");
  Point<double> p;
  p.n = m.dim;
  for (int i = 0; i < m.dim; ++i) p[i] = coords[static_cast<std::size_t>(i)];
  check_domain(m, p);

  const auto vec = [&](const std::string& spec, int fallback) {
    if (!spec.empty()) return parse_field_spec(spec, m.dim, true);
    return Field::from(coord_field(m.dim, fallback));
  };
  if (op == "ricP") {
    print_tensor(ric_P(geo, p));
  } else if (op == "riemann" || op == "RP") {
    print_tensor(curvature(geo, p));
  } else if (op == "divP") {
    std::cout.precision(12);
    std::cout << div_P(geo, vec(field, 0), p) << "\n";
  } else if (op == "frakD") {
    print_tensor(frak_D(geo, vec(field, 0), vec(field2, 1 % m.dim), p));
  } else if (op == "E") {
    print_tensor(field_E(geo, p));
  } else if (op == "dP") {
    if (field.empty()) throw Error(ErrorKind::config, "dP needs --field");
    print_tensor(d_P(geo, parse_field_spec(field, m.dim, false), p));
  } else {
    throw Error(ErrorKind::config, "unknown operator '" + op + "' (ricP, RP, divP, frakD, E, dP)");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"P-structure Bochner-Weitzenboeck verification"};
  app.require_subcommand(1);

  std::string config, format, out, backend;
  std::vector<std::string> scenarios;
  int grid = 0;
  long long seed = -1;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--config", config, "JSON config file");
  verify->add_option("--scenario", scenarios, "fixture:P-spec:K-spec (repeatable)");
  verify->add_option("--grid", grid, "pointwise samples per dimension")->check(CLI::Range(8, 4096));
  verify->add_option("--backend", backend, "analytic or fd")->check(CLI::IsMember({"analytic", "fd"}));
  verify->add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);
  verify->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--out", out, "report path (default stdout)");

  std::string what;
  auto* list = app.add_subcommand("list", "list fixtures, structures or checks");
  list->add_option("what", what, "fixtures | structures | checks")->required();

  std::string op, fixture = "T2-flat", structure, point, field, field2, ebackend;
  auto* eval = app.add_subcommand("eval", "evaluate one operator at a point");
  eval->add_option("op", op, "ricP | RP | divP | frakD | E | dP")->required();
  eval->add_option("--fixture", fixture, "fixture name");
  eval->add_option("--structure", structure, "P-spec:K-spec")->required();
  eval->add_option("--point", point, "comma-separated coordinates")->required();
  eval->add_option("--field", field, "field spec, e.g. sinx*dx_vec");
  eval->add_option("--field2", field2, "second vector field (frakD)");
  eval->add_option("--backend", ebackend, "analytic or fd")->check(CLI::IsMember({"analytic", "fd"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*verify) return cmd_verify(config, scenarios, grid, backend, seed, format, out);
    if (*list) return cmd_list(what);
    if (*eval) return cmd_eval(op, fixture, structure, point, field, field2, ebackend);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
