// Acceptance run: one PASS/FAIL line per criterion. Tolerances are pinned here
// and do not read the suite's Tolerances, so loosening those cannot hide a regression.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bochner/report.hpp"
#include "bochner/verification.hpp"

using namespace bochner;

namespace {

constexpr double kWei0Analytic = 1e-10;
constexpr double kWei0Fd = 1e-4;
constexpr double kRuntimeS = 60.0;
constexpr double kWei = 1e-8;
constexpr double kMethods = 1e-10;
constexpr double kBochner = 1e-8;
constexpr double kFrakK = 1e-12;
constexpr double kStokes = 1e-6;
constexpr double kNegative = 1e-3;
constexpr double kAdjoint = 1e-6;
constexpr double kOrder = 1.8;

const ScenarioReport* find_scenario(const SuiteReport& r, const std::string& label) {
  for (const auto& s : r.scenarios)
    if (s.scenario == label) return &s;
  return nullptr;
}

const CheckResult* find(const ScenarioReport* s, const std::string& name) {
  if (!s) return nullptr;
  for (const auto& c : s->checks)
    if (c.name == name) return &c;
  return nullptr;
}

struct Line {
  bool ok = true;
  std::string detail;
  void need(bool cond, const std::string& why) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + why;
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// residual of a check that must pass below `bound`; appends the value to the detail
void bounded(Line& l, const ScenarioReport* s, const std::string& name, double bound, std::string& values) {
  const CheckResult* c = find(s, name);
  if (!c) {
    l.need(false, name + " missing");
    return;
  }
  l.need(c->status == Status::pass, name + " is " + std::string(to_string(c->status)));
  l.need(c->residual <= bound, name + " " + sci(c->residual) + " > " + sci(bound));
  values += (values.empty() ? "" : ", ") + name + " " + sci(c->residual);
}

Config config_from(const std::vector<std::string>& shorthands) {
  Config cfg;
  cfg.seed = 20240611;
  for (const auto& s : shorthands) {
    Scenario sc = parse_scenario(s);
    sc.seed = cfg.seed;
    sc.grid = 32;
    sc.quad_grid = 128;
    cfg.scenarios.push_back(sc);
  }
  return cfg;
}

}  // namespace

int main() {
  const char* s2 = "S2-round:P-id:K-0";
  const char* cubic = "T2-flat:P-id:K-cubic(1,0)";
  const char* tilt = "T2-flat:P-tilt(0.3):K-0";

  Config cfg = config_from({s2, cubic, "T2-flat:P-proj:K-0", "T2-flat:J-rot:K-0", "T2-warped:P-id:K-0",
                            tilt});
  {
    Scenario t3 = parse_scenario("T3-flat:P-id:K-cubic(1,0.5)");
    t3.seed = cfg.seed;
    t3.grid = 8;
    t3.degrees = {1, 2};
    cfg.scenarios.push_back(t3);
    Scenario fd = parse_scenario(s2);
    fd.seed = cfg.seed;
    fd.grid = 32;
    fd.backend = Backend::fd;
    cfg.scenarios.push_back(fd);
  }

  const SuiteReport rep = run_suite(cfg);
  const SuiteReport neg = run_suite(config_from({"T2-flat:P-sing:K-0"}));
  // satisfies the Stokes hypothesis but not the anchor axiom, so it only joins criterion 4
  const SuiteReport wave = run_suite(config_from({"T2-flat:P-wave:K-0"}));

  std::vector<std::pair<std::string, Line>> lines;

  {
    Line l;
    std::string v;
    const auto* a = find_scenario(rep, s2);
    const auto* f = find_scenario(rep, std::string(s2) + " [fd]");
    bounded(l, a, "wei0", kWei0Analytic, v);
    std::string vf;
    bounded(l, f, "wei0", kWei0Fd, vf);
    const double rt = (a ? a->runtime_s : 1e9) + (f ? f->runtime_s : 1e9);
    l.need(rt <= kRuntimeS, "runtime " + sci(rt) + " s");
    l.detail = l.ok ? "analytic " + v + ", fd " + vf + ", runtime " + sci(rt) + " s" : l.detail;
    lines.push_back({"1 classical reduction (E-Wei0)", l});
  }
  {
    Line l;
    std::string v;
    const auto* s = find_scenario(rep, cubic);
    bounded(l, s, "wei", kWei, v);
    bounded(l, s, "wei.methods", kMethods, v);
    std::string t3;
    bounded(l, find_scenario(rep, "T3-flat:P-id:K-cubic(1,0.5)"), "wei.methods", kMethods, t3);
    if (l.ok) l.detail = v + ", T3 " + t3;
    lines.push_back({"2 Weitzenboeck decomposition (E-Wei)", l});
  }
  {
    Line l;
    std::string v;
    const auto* s = find_scenario(rep, cubic);
    bounded(l, s, "bochner", kBochner, v);
    bounded(l, s, "frakK.k1", kFrakK, v);
    if (l.ok) l.detail = v;
    lines.push_back({"3 Bochner-Weitzenboeck (GrindEP-2-6)", l});
  }
  {
    Line l;
    int held = 0;
    double worst = 0.0;
    std::vector<const ScenarioReport*> all;
    for (const auto& s : rep.scenarios) all.push_back(&s);
    for (const auto& s : wave.scenarios) all.push_back(&s);
    for (const ScenarioReport* sp : all) {
      const ScenarioReport& s = *sp;
      const auto* cond = find(&s, "cond.div");
      if (!cond || cond->note != "holds") continue;
      ++held;
      std::string v;
      bounded(l, &s, "stokes", kStokes, v);
      if (const auto* c = find(&s, "stokes")) {
        worst = std::max(worst, c->residual);
        l.need(c->note.find("10 fields") != std::string::npos, s.scenario + " stokes ran fewer than 10 fields");
        // 3D fixtures integrate on a coarser tensor grid
        if (s.scenario.rfind("T3", 0) != 0)
          l.need(c->note.find("128 nodes") != std::string::npos, s.scenario + " stokes not at 128 nodes");
      }
    }
    l.need(held > 0, "no fixture satisfies E-cond-PP-stat");
    const auto* nc = find(find_scenario(rep, tilt), "stokes.negative_control");
    l.need(nc && nc->residual > kNegative, "negative control integral not above " + sci(kNegative));
    if (l.ok) l.detail = std::to_string(held) + " fixtures, max " + sci(worst) + "; negative control " + sci(nc->residual);
    lines.push_back({"4 Stokes-type theorem", l});
  }
  {
    Line l;
    int ran = 0, measured = 0, exact = 0;
    double worst = 0.0;
    for (const auto& s : rep.scenarios) {
      for (const char* name : {"adjoint.nabla", "adjoint.d"}) {
        const auto* c = find(&s, name);
        if (!c || c->status == Status::skip) continue;
        ++ran;
        std::string v;
        bounded(l, &s, name, kAdjoint, v);
        worst = std::max(worst, c->residual);
        // the suite fails the check when the measured order is below its pin; re-check ours here
        // an integrand resolved exactly at every level has no discretization error to fit
        if (c->note.find("order not measurable") != std::string::npos) {
          ++exact;
          continue;
        }
        const auto at = c->note.find("convergence order ");
        l.need(at != std::string::npos, s.scenario + " " + name + " order not measured");
        if (at == std::string::npos) continue;
        ++measured;
        std::string rest = c->note.substr(at + 18);
        std::size_t pos = 0;
        while ((pos = rest.find("k=")) != std::string::npos) {
          rest = rest.substr(pos + 2);
          const auto sp = rest.find(' ');
          const double o = std::stod(rest.substr(sp + 1));
          l.need(o >= kOrder, s.scenario + " " + name + " order " + sci(o));
          rest = rest.substr(sp + 1);
        }
      }
    }
    l.need(ran > 0, "no adjoint check ran");
    l.need(measured > 0, "no convergence order measured");
    if (l.ok)
      l.detail = std::to_string(ran) + " checks, max " + sci(worst) + ", " + std::to_string(measured) +
                 " orders >= " + sci(kOrder) + ", " + std::to_string(exact) + " exact at every level";
    lines.push_back({"5 adjointness and convergence order", l});
  }
  {
    Line l;
    const std::vector<std::pair<std::string, std::string>> wanted = {
        {"prop1", "Prop. 1"},
        {"prop2", "Prop. 2"},
        {"prop3", "E-statP"},
        {"codiff.variants", "E-adj-nabla-P"},
        {"dP.variants", "E-58-59"},
        {"laplacian.variants", "E-58-59"},
        {"prop10.item1", "Prop. 10 item 1"},
        {"prop10.item2", "Prop. 10 item 2"},
        {"prop10.item3", "Prop. 10 item 3"},
        {"prop10.item4", "Prop. 10 item 4"},
        {"prop10.item5", "Prop. 10 item 5"},
        {"ric.E-Ric-K", "E-Ric-K"},
        {"ric_hat_ric", "E-Ric-hat-Ric"},
        {"lemma4", "L-0-3P1+"},
        {"lmab+", "lmab+"},
        {"bianchi", "first Bianchi"},
        {"algebroid.antisymmetry", "D-ALA"},
        {"algebroid.leibniz", "D-ALA"},
        {"algebroid.anchor", "E-anchor"},
        {"algebroid.jacobiator", "E-J-rho"},
        {"algebroid.d_rho_squared", "E-D-rho"},
    };
    int passes = 0;
    for (const auto& [name, anchor] : wanted) {
      int here = 0;
      for (const auto& s : rep.scenarios) {
        const auto* c = find(&s, name);
        if (!c) {
          l.need(false, s.scenario + " lacks " + name);
          continue;
        }
        l.need(c->anchor == anchor, name + " anchor '" + c->anchor + "'");
        l.need(c->status != Status::fail, s.scenario + " " + name + " failed");
        if (c->status == Status::pass) {
          l.need(c->residual <= c->tolerance, s.scenario + " " + name + " above tolerance");
          ++here;
        }
      }
      l.need(here > 0, name + " never exercised");
      passes += here;
    }
    if (l.ok) l.detail = std::to_string(wanted.size()) + " checks, " + std::to_string(passes) + " passing instances";
    lines.push_back({"6 proposition suite", l});
  }
  {
    Line l;
    const auto* s = neg.scenarios.empty() ? nullptr : &neg.scenarios.front();
    std::string v;
    for (const char* name : {"cond.frakD", "algebroid.d_rho_squared", "algebroid.anchor"}) {
      const auto* c = find(s, name);
      l.need(c && c->residual > kNegative, std::string(name) + " not above " + sci(kNegative));
      l.need(c && !c->witness.point.empty(), std::string(name) + " has no witness");
      if (c) v += (v.empty() ? "" : ", ") + std::string(name) + " " + sci(c->residual);
    }
    // every check gated on a condition that does not hold must be skipped
    std::set<std::string> broken;
    int gated = 0;
    if (s)
      for (const auto& c : s->checks)
        if (c.name.rfind("cond.", 0) == 0 && c.note == "does not hold") broken.insert(c.anchor);
    l.need(!broken.empty(), "no hypothesis reported as failing");
    if (s)
      for (const auto& c : s->checks) {
        const bool hit = std::any_of(c.hypotheses.begin(), c.hypotheses.end(),
                                     [&](const std::string& h) { return broken.count(h) > 0; });
        if (!hit) continue;
        ++gated;
        l.need(c.status == Status::skip, c.name + " is " + std::string(to_string(c.status)));
      }
    l.need(gated > 0, "no gated checks found");
    if (l.ok) l.detail = v + "; " + std::to_string(gated) + " gated checks skipped";
    lines.push_back({"7 negative controls", l});
  }
  {
    Line l;
    const SuiteReport again = run_suite(cfg);
    const std::string a = check_bodies_json(rep), b = check_bodies_json(again);
    l.need(a == b, "check bodies differ between runs");
    if (l.ok) l.detail = std::to_string(a.size()) + " bytes identical";
    lines.push_back({"8 determinism", l});
  }

  int failed = 0;
  for (const auto& [title, l] : lines) {
    std::printf("%s  %-40s %s\n", l.ok ? "PASS" : "FAIL", title.c_str(), l.detail.c_str());
    if (!l.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
