#include "bochner/verification.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bochner/report.hpp"
#include "verify_internal.hpp"

namespace bochner {

namespace {

using json = nlohmann::json;

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

[[noreturn]] void bad_key(const std::string& where, const std::string& key, const std::string& why) {
  throw Error(ErrorKind::config, where + ": key '" + key + "' " + why);
}

double number(const json& j, const std::string& where, const std::string& key) {
  if (!j.is_number()) bad_key(where, key, "must be a number");
  return j.get<double>();
}

int positive_int(const json& j, const std::string& where, const std::string& key) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) bad_key(where, key, "must be a positive integer");
  return j.get<int>();
}

std::uint64_t seed_value(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad_key(where, "seed", "must be a non-negative integer");
  return j.get<std::uint64_t>();
}

void read_tolerances(const json& j, Tolerances& t, const std::string& where) {
  if (!j.is_object()) bad_key(where, "tolerances", "must be an object");
  const std::map<std::string, double*> fields = {
      {"analytic", &t.analytic},
      {"fd1", &t.fd1},
      {"fd2", &t.fd2},
      {"fd3", &t.fd3},
      {"quadrature", &t.quadrature},
      {"weitzenbock", &t.weitzenbock},
      {"bochner", &t.bochner},
      {"frak_k", &t.frak_k},
      {"classical_analytic", &t.classical_analytic},
      {"classical_fd", &t.classical_fd},
      {"methods", &t.methods},
      {"negative_control", &t.negative_control},
      {"convergence_order", &t.convergence_order},
  };
  for (const auto& [key, val] : j.items()) {
    if (key == "checks") {
      if (!val.is_object()) bad_key(where, "tolerances.checks", "must be an object");
      for (const auto& [name, v] : val.items()) {
        if (!find_check(name)) bad_key(where, "tolerances.checks." + name, "names no known check");
        t.overrides[name] = number(v, where, "tolerances.checks." + name);
      }
      continue;
    }
    const auto it = fields.find(key);
    if (it == fields.end()) bad_key(where, "tolerances." + key, "is not a tolerance class");
    *it->second = number(val, where, "tolerances." + key);
  }
}

Scenario read_scenario(const json& j, const Scenario& defaults, std::size_t index) {
  const std::string where = "scenarios[" + std::to_string(index) + "]";
  if (j.is_string()) {
    Scenario s = parse_scenario(j.get<std::string>());
    s.grid = defaults.grid;
    s.quad_grid = defaults.quad_grid;
    s.backend = defaults.backend;
    s.degrees = defaults.degrees;
    s.seed = defaults.seed;
    return s;
  }
  if (!j.is_object()) throw Error(ErrorKind::config, where + ": expected a string or an object");
  if (!j.contains("scenario")) bad_key(where, "scenario", "is required");
  if (!j.at("scenario").is_string()) bad_key(where, "scenario", "must be a string");
  Scenario s = parse_scenario(j.at("scenario").get<std::string>());
  s.grid = defaults.grid;
  s.quad_grid = defaults.quad_grid;
  s.backend = defaults.backend;
  s.degrees = defaults.degrees;
  s.seed = defaults.seed;
  for (const auto& [key, val] : j.items()) {
    if (key == "scenario") continue;
    if (key == "grid") {
      s.grid = positive_int(val, where, key);
    } else if (key == "quad_grid") {
      s.quad_grid = positive_int(val, where, key);
    } else if (key == "backend") {
      if (!val.is_string()) bad_key(where, key, "must be a string");
      try {
        s.backend = backend_from_string(val.get<std::string>());
      } catch (const Error& e) {
        bad_key(where, key, e.what());
      }
    } else if (key == "degrees") {
      if (!val.is_array()) bad_key(where, key, "must be an array");
      s.degrees.clear();
      for (const auto& d : val) {
        if (!d.is_number_integer()) bad_key(where, key, "must hold integers");
        s.degrees.push_back(d.get<int>());
      }
    } else if (key == "seed") {
      s.seed = seed_value(val, where);
    } else if (key == "tolerances") {
      if (!val.is_object()) bad_key(where, key, "must be an object");
      for (const auto& [name, v] : val.items()) {
        if (!find_check(name)) bad_key(where, "tolerances." + name, "names no known check");
        s.tolerance_overrides[name] = number(v, where, "tolerances." + name);
      }
    } else {
      bad_key(where, key, "is not recognised");
    }
  }
  return s;
}

}  // namespace

std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skip: return "skip";
    case Status::info: return "info";
  }
  return "fail";
}

Status status_from_string(std::string_view s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "skip") return Status::skip;
  if (s == "info") return Status::info;
  throw Error(ErrorKind::config, "unknown status '" + std::string(s) + "'");
}

std::string Scenario::label() const { return fixture + ":" + p.str() + ":" + k.str(); }

Scenario parse_scenario(const std::string& shorthand) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char ch : shorthand) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ':' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3 || depth != 0)
    throw Error(ErrorKind::config, "scenario '" + shorthand + "' is not of the form fixture:P-spec:K-spec");
  for (const auto& p : parts)
    if (p.empty()) throw Error(ErrorKind::config, "scenario '" + shorthand + "' has an empty field");
  Scenario s;
  s.fixture = parts[0];
  s.p = parse_named_spec(parts[1]);
  s.k = parse_named_spec(parts[2]);
  return s;
}

Config parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::config, "config must be a JSON object");
  Config cfg;
  Scenario defaults;
  if (j.contains("seed")) cfg.seed = seed_value(j.at("seed"), "config");
  defaults.seed = cfg.seed;
  for (const auto& [key, val] : j.items()) {
    if (key == "seed" || key == "scenarios") continue;
    if (key == "format") {
      if (!val.is_string() || (val != "text" && val != "json")) bad_key("config", key, "must be \"text\" or \"json\"");
      cfg.format = val.get<std::string>();
    } else if (key == "out") {
      if (!val.is_string()) bad_key("config", key, "must be a string");
      cfg.out = val.get<std::string>();
    } else if (key == "tolerances") {
      read_tolerances(val, cfg.tolerances, "config");
    } else if (key == "defaults") {
      if (!val.is_object()) bad_key("config", key, "must be an object");
      json probe = val;
      probe["scenario"] = "T2-flat:P-id:K-0";
      const Scenario d = read_scenario(probe, defaults, 0);
      defaults.grid = d.grid;
      defaults.quad_grid = d.quad_grid;
      defaults.backend = d.backend;
      defaults.degrees = d.degrees;
      defaults.seed = d.seed;
    } else {
      bad_key("config", key, "is not recognised");
    }
  }
  if (j.contains("scenarios")) {
    const json& arr = j.at("scenarios");
    if (!arr.is_array()) bad_key("config", "scenarios", "must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) cfg.scenarios.push_back(read_scenario(arr[i], defaults, i));
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const Scenario& s, const ManifoldRegistry& reg) {
  if (!reg.contains(s.fixture)) throw Error(ErrorKind::config, "unknown fixture '" + s.fixture + "'");
  const Manifold& m = reg.get(s.fixture);
  if (s.grid != 0 && s.grid < 8) throw Error(ErrorKind::config, s.label() + ": grid must be >= 8 per dimension");
  if (s.quad_grid < 8) throw Error(ErrorKind::config, s.label() + ": quad_grid must be >= 8");
  for (int d : s.degrees)
    if (d < 0 || d > m.dim) throw Error(ErrorKind::config, s.label() + ": form degree " + std::to_string(d) + " out of range");
  Diff diff;
  diff.backend = s.backend;
  const PStructure ps = make_structure(m, s.p, s.k, diff);
  // evaluate once so structure-specific domain errors surface here
  const auto pts = sample_grid(m, 2);
  (void)ps.P(pts.front());
  (void)ps.A(pts.front());
}

int SuiteReport::count(Status s) const {
  int c = 0;
  for (const auto& sc : scenarios)
    for (const auto& ch : sc.checks) c += ch.status == s;
  return c;
}

const std::vector<CatalogCheck>& check_catalog() {
  static const std::vector<CatalogCheck> cat = {
      {"chart.metric", "metric g", "chart", "g symmetric positive definite at every sample"},
      {"chart.christoffel", "Levi-Civita", "chart", "Gamma symmetric in its lower indices and nabla g = 0"},
      {"chart.riemann", "Curv-S-1", "chart", "Riemann antisymmetries, pair symmetry, first Bianchi"},
      {"chart.frame", "so(TM) basis", "chart", "frame orthonormal; xi_alpha orthonormal and skew"},
      {"chart.divergence", "dvol_g", "chart", "integral of the classical divergence of random X"},
      {"cond.statistical", "E-stat-K", "structure", "A totally symmetric"},
      {"cond.frakD", "E-condPP", "structure", "frak-D^P = 0 from brackets of frame fields"},
      {"cond.condPP_stat", "E-condPP-stat", "structure", "(nabla_PX P)Y = (nabla_PY P)X"},
      {"cond.div", "E-cond-PP-stat", "structure", "(div P)(X) = tr K_X"},
      {"cond.div2", "E-cond-PP-stat-2", "structure", "div P = 0 and E = 0"},
      {"cond.codazzi", "E-cond-PK2", "structure", "(nabla_PX K)_Y = (nabla_PY K)_X"},
      {"cond.E_zero", "E", "structure", "E = sum_i K_{e_i} e_i vanishes"},
      {"cond.P_metric", "nabla^P g = 0", "structure", "P-connection is metric"},
      {"cond.K_skew", "K* = -K", "structure", "A(X,Y,Z) + A(X,Z,Y) = 0"},
      {"cond.P_selfadjoint", "P* = P", "structure", "P self-adjoint"},
      {"cond.bracket_generating", "bracket-generating", "structure", "n minus the rank of P(TM) + [P(TM),P(TM)]"},
      {"frakD.tensorial", "frak-D^P", "structure", "frak-D^P(fX,Y) = f frak-D^P(X,Y)"},
      {"prop1", "Prop. 1", "structure", "nabla^P g = -A - A^sigma; metric iff K skew"},
      {"prop2", "Prop. 2", "structure", "frak-D^P = (nabla_PX P)Y - (nabla_PY P)X; equivalence of the two tests"},
      {"prop3", "E-statP", "structure", "nabla^P g = -2A and totally symmetric"},
      {"bracket_stat", "E-bracket-stat", "structure", "[X,Y]_P = nabla_PX Y - nabla_PY X"},
      {"E_trace", "E", "structure", "<E,X> = tr K_X"},
      {"stat_L1_a", "E-stat-L1-a", "structure", "sum_i (K_{e_i} w)(e_i, ..) = -i_E w"},
      {"stat_L1_b", "E-stat-L1-b", "structure", "sum_i w(e_i, .., K_{e_i} X_a, ..) = 0"},
      {"conjugate.duality", "conjugate P-connection", "structure",
       "PX<Y,Z> = <nabla^P_X Y, Z> + <Y, nabla-bar^P_X Z>"},
      {"conjugate.midpoint", "2 nabla-hat^P = nabla^P + nabla-bar^P", "structure", "midpoint of the conjugate pair"},
      {"conjugate.involution", "conjugate involution", "structure", "conjugating twice returns (P, K)"},
      {"remark2", "Remark 2", "structure", "conjugate has the same P-bracket and frak-D^P"},
      {"dP.derivation", "E-1deg-der", "diffops", "alternation of nabla^P equals the derivation formula"},
      {"dP.variants", "E-58-59", "diffops", "d-hat^P = d^P = d-bar^P"},
      {"codiff.variants", "E-adj-nabla-P", "diffops", "delta^P = delta-hat^P + i_E, delta-bar^P = delta-hat^P - i_E"},
      {"divPX", "E-divPX", "diffops", "div_P X = -nabla^{*P} X-flat"},
      {"div.formula", "E-div-formula", "diffops", "div_P(fY) = f div_P Y + <nabla^P f, Y>"},
      {"div.decomposition", "E-Pdiv-1", "diffops", "div_P X = div(PX) - (div P)(X) + sum <K_{e_i} X, e_i>"},
      {"divf4", "E-divf-4", "diffops", "div_P X = div(PX)"},
      {"laplacian.variants", "E-58-59", "diffops", "Delta-hat = Delta + L^P_E = Delta-bar - L^P_E"},
      {"laplacian.function", "R-4-2", "diffops", "Delta^P f = Delta-hat^P f + (PE)(f)"},
      {"classical.reduction", "P = id, K = 0", "diffops", "d^P, L^P, div_P, Delta^P f reduce to classical operators"},
      {"stokes", "T-P-Stokes", "quadrature", "integral of div_P X vanishes"},
      {"stokes.negative_control", "T-P-Stokes", "quadrature", "integral of div_P X when the hypothesis fails"},
      {"adjoint.nabla", "E-cond-PP-int", "quadrature", "(nabla-bar^{*P} w2, w1) = (w2, nabla^P w1)"},
      {"adjoint.d", "E-1deg-2", "quadrature", "(delta-bar^P w2, w1) = (w2, d^P w1)"},
      {"harmonic.energy", "E-def-P-Lap", "quadrature", "(Delta^P w, w) = |d^P w|^2 + |delta-bar^P w|^2"},
      {"function.energy", "T-Delta-f", "quadrature", "(Delta^P f, f) = -|nabla^P f|^2"},
      {"second_derivative", "second P-derivative", "curvature", "(nabla^P)^2_{X,Y} f - (nabla^P)^2_{Y,X} f = frak-D^P(X,Y) f"},
      {"bianchi", "first Bianchi", "curvature", "cyclic sum of R^P_{X,Y}Z equals the P-Jacobiator"},
      {"prop10.item1", "Prop. 10 item 1", "curvature", "R^P = R_{PX,PY} + [K_X,K_Y]; action on 1-forms; skew"},
      {"prop10.item2", "Prop. 10 item 2", "curvature", "R^P f = 0, R^P g = 0"},
      {"prop10.item3", "Prop. 10 item 3", "curvature", "action on (1,1) tensors"},
      {"prop10.item4", "Prop. 10 item 4", "curvature", "R^P(X,Y,Z,W) = R(PX,PY,Z,W) + <[K_X,K_Y]Z,W>"},
      {"prop10.item5", "Prop. 10 item 5", "curvature", "antisymmetry in both pairs"},
      {"ric.E-Ric-K", "E-Ric-K", "curvature", "Ric^P = Ric-hat^P + <K_X Y, E> - <K_X, K_Y>"},
      {"ric.conjugate", "Ric-bar^P = Ric^P", "curvature", "conjugate Ricci agrees"},
      {"conjugate.curvature_sum", "R^P + R-bar^P = 2 R-hat^P", "curvature", "measured, not asserted"},
      {"conjugate.curvature_dual", "<R^P Z,W> = -<R-bar^P W,Z>", "curvature", "conjugate curvature duality"},
      {"bivector.K_symmetric", "K* = K on Lambda^2", "curvature", "the K operator on bivectors is symmetric"},
      {"lmab+", "lmab+", "curvature", "R^P(xi) is skew-symmetric"},
      {"lemma4", "L-0-3P1+", "curvature", "R^P(X^Y) = -sum (<R(xi)PX,PY> + <K(X^Y),xi>) xi"},
      {"wei.methods", "E-Ric-Pb", "curvature", "direct, coordinate and xi-basis Weitzenboeck operators agree"},
      {"wei.one_form", "Ric^P(w)(X) = w(Ric^P(X))", "curvature", "Weitzenboeck operator on 1-forms"},
      {"ric_hat_ric", "E-Ric-hat-Ric", "curvature", "Weitzenboeck hat operator minus the K operator"},
      {"frakK.k1", "R-cn", "curvature", "<K w, w> = |K_{w#}|^2 for 1-forms"},
      {"algebroid.antisymmetry", "D-ALA", "algebroid", "[X,Y]_P = -[Y,X]_P"},
      {"algebroid.leibniz", "D-ALA", "algebroid", "[X,fY]_P = (PX)(f) Y + f[X,Y]_P"},
      {"algebroid.anchor", "E-anchor", "algebroid", "P[X,Y]_P = [PX,PY]"},
      {"algebroid.d_rho_squared", "E-D-rho", "algebroid", "(d^rho)^2 f = 0"},
      {"algebroid.d_rho_forms", "E-D-rho", "algebroid", "(d^rho)^2 on 1-forms; class of the algebroid"},
      {"algebroid.d_rho", "d^rho", "algebroid", "d^rho from anchor and bracket equals d^P"},
      {"algebroid.jacobiator", "E-J-rho", "algebroid", "P applied to the Jacobiator vanishes"},
      {"algebroid.torsion", "E-T-rho", "algebroid", "the P-connection as rho-connection: Koszul rules, zero torsion"},
      {"algebroid.bianchi_torsion", "E-T-rho", "algebroid", "Bianchi identity with torsion and Jacobiator"},
      {"wei0", "E-Wei0", "flagship", "classical Weitzenboeck formula"},
      {"wei", "E-Wei", "flagship", "Delta^P = nabla-bar^{*P} nabla^P + Ric^P"},
      {"wei_E", "E-Wei-E", "flagship", "Weitzenboeck decomposition with the E terms"},
      {"bochner", "GrindEP-2-6", "flagship", "Bochner-Weitzenboeck formula for k-forms"},
      {"vanishing.parallel", "T-85", "vanishing", "P-parallel candidates are P-harmonic"},
      {"vanishing.function", "T-Delta-f", "vanishing", "f with Delta^P f = 0 has nabla^P f = 0"},
      {"vanishing.positivity", "P-RP-ge0", "vanishing", "curvature operator bound implies Weitzenboeck bound"},
  };
  return cat;
}

const CatalogCheck* find_check(std::string_view name) {
  for (const auto& c : check_catalog())
    if (c.name == name) return &c;
  return nullptr;
}

namespace detail {

Ctx::Ctx(const Scenario& s, const Tolerances& t, const Manifold& manifold)
    : sc(s),
      tol(t),
      m(manifold),
      diff{s.backend},
      ps(make_structure(m, s.p, s.k, diff)),
      conj(conjugate(ps)),
      geo(m, ps, diff),
      geo_conj(m, conj, diff) {
  const int G = s.grid > 0 ? s.grid : (m.dim <= 2 ? 32 : 8);
  pts = sample_grid(m, G);
  degrees = s.degrees;
  if (degrees.empty())
    for (int k = 1; k <= m.dim; ++k) degrees.push_back(k);
}

bool Ctx::classical() const {
  return ps.p_spec.name == "P-id" && ps.k_spec.name == "K-0" && !ps.conjugated;
}

double Ctx::pt_tol(int order) const {
  if (analytic()) return tol.analytic;
  if (order <= 1) return tol.fd1;
  if (order == 2) return tol.fd2;
  return tol.fd3;
}

double Ctx::tol_for(const std::string& check, double dflt) const {
  if (auto it = sc.tolerance_overrides.find(check); it != sc.tolerance_overrides.end()) return it->second;
  if (auto it = tol.overrides.find(check); it != tol.overrides.end()) return it->second;
  return dflt;
}

Rng Ctx::rng(std::string_view check) const {
  std::uint64_t h = fnv1a(sc.label());
  h = fnv1a(check, h ^ (sc.seed * 0x9E3779B97F4A7C15ULL));
  return Rng(h);
}

void Ctx::set_hyp(const std::string& name, const ConditionResidual& r) { hyp[name] = {r.pass(), r.value}; }

bool Ctx::has(const std::string& name) const {
  const auto it = hyp.find(name);
  return it != hyp.end() && it->second.ok;
}

void Ctx::run(const std::string& name, const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = name;
  const CatalogCheck* cat = find_check(name);
  r.anchor = cat ? cat->anchor : name;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.status = Status::fail;
    r.residual = std::numeric_limits<double>::quiet_NaN();
    r.note = std::string("error: ") + e.what();
  }
  if (r.status == Status::pass) r.status = r.residual <= r.tolerance ? Status::pass : Status::fail;
  out.push_back(std::move(r));
}

bool gate(const Ctx& c, CheckResult& r, std::initializer_list<std::string_view> hyps) {
  std::string failed;
  for (std::string_view h : hyps) {
    r.hypotheses.emplace_back(h);
    const auto it = c.hyp.find(std::string(h));
    if (it == c.hyp.end() || !it->second.ok) {
      if (!failed.empty()) failed += ", ";
      failed += std::string(h);
    }
  }
  if (failed.empty()) return true;
  r.status = Status::skip;
  r.residual = std::numeric_limits<double>::quiet_NaN();
  r.note = "hypothesis failed: " + failed;
  return false;
}

void fold(CheckResult& r, double v, const Point<double>& p, std::vector<int> slots) {
  ConditionResidual acc;
  acc.value = r.residual;
  acc.witness = r.witness;
  acc.update(v, p, std::move(slots));
  r.residual = acc.value;
  r.witness = acc.witness;
}

std::vector<Point<double>> thin(const std::vector<Point<double>>& pts, std::size_t cap) {
  if (pts.size() <= cap) return pts;
  const std::size_t stride = (pts.size() + cap - 1) / cap;
  std::vector<Point<double>> out;
  for (std::size_t i = 0; i < pts.size(); i += stride) out.push_back(pts[i]);
  return out;
}

double convergence_order(const std::vector<double>& residuals, double floor) {
  double worst = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
    const double a = residuals[i], b = residuals[i + 1];
    if (!(a > floor) || !(b > floor)) continue;
    worst = std::min(worst, std::log2(a / b));
    any = true;
  }
  return any ? worst : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

ScenarioReport run_scenario(const Scenario& s, const Tolerances& tol, const ManifoldRegistry& reg) {
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioReport rep;
  rep.scenario = s.backend == Backend::fd ? s.label() + " [fd]" : s.label();
  detail::Ctx c(s, tol, reg.get(s.fixture));
  detail::stage_chart(c);
  detail::stage_structure(c);
  detail::stage_diffops(c);
  detail::stage_quadrature(c);
  detail::stage_curvature(c);
  detail::stage_algebroid(c);
  detail::stage_flagship(c);
  detail::stage_vanishing(c);
  rep.checks = std::move(c.out);
  rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

int thread_count() {
  const char* env = std::getenv("BOCHNERLAB_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0') return 1;
  return static_cast<int>(std::clamp(v, 1L, 64L));
}

SuiteReport run_suite(const Config& cfg, const ManifoldRegistry& reg) {
  for (const auto& s : cfg.scenarios) validate(s, reg);
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.meta = convention_notes();
  rep.meta["seed"] = std::to_string(cfg.seed);
  rep.scenarios.resize(cfg.scenarios.size());
  const int workers = std::min<int>(thread_count(), std::max<int>(1, static_cast<int>(cfg.scenarios.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(cfg.scenarios.size());
  const auto work = [&] {
    for (std::size_t i = next++; i < cfg.scenarios.size(); i = next++) {
      try {
        rep.scenarios[i] = run_scenario(cfg.scenarios[i], cfg.tolerances, reg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.meta["runtime_s"] = std::to_string(total);
  for (const auto& sr : rep.scenarios) rep.meta["runtime_s " + sr.scenario] = std::to_string(sr.runtime_s);
  return rep;
}

}  // namespace bochner
