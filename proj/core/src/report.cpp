#include "bochner/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "bochner/errors.hpp"

namespace bochner {

using nlohmann::ordered_json;

namespace {

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double number_from(const ordered_json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

ordered_json check_json(const CheckResult& c) {
  ordered_json j;
  j["name"] = c.name;
  j["anchor"] = c.anchor;
  j["hypotheses"] = c.hypotheses;
  j["residual"] = number(c.residual);
  j["tolerance"] = number(c.tolerance);
  j["status"] = std::string(to_string(c.status));
  ordered_json w;
  w["point"] = ordered_json::array();
  for (double x : c.witness.point) w["point"].push_back(number(x));
  w["slots"] = c.witness.slots;
  j["witness"] = w;
  j["note"] = c.note;
  return j;
}

ordered_json scenarios_json(const SuiteReport& r) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : r.scenarios) {
    ordered_json js;
    js["scenario"] = s.scenario;
    js["checks"] = ordered_json::array();
    for (const auto& c : s.checks) js["checks"].push_back(check_json(c));
    arr.push_back(js);
  }
  return arr;
}

std::string sci(double v) {
  if (std::isnan(v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

}  // namespace

std::string report_to_json(const SuiteReport& r, int indent) {
  ordered_json j;
  j["meta"] = r.meta;
  j["scenarios"] = scenarios_json(r);
  return j.dump(indent) + "\n";
}

std::string check_bodies_json(const SuiteReport& r) { return scenarios_json(r).dump(2) + "\n"; }

SuiteReport report_from_json(const std::string& text) {
  SuiteReport r;
  try {
    const auto j = ordered_json::parse(text);
    for (const auto& [k, v] : j.at("meta").items()) r.meta[k] = v.get<std::string>();
    for (const auto& js : j.at("scenarios")) {
      ScenarioReport s;
      s.scenario = js.at("scenario").get<std::string>();
      if (auto it = r.meta.find("runtime_s " + s.scenario); it != r.meta.end()) s.runtime_s = std::stod(it->second);
      for (const auto& jc : js.at("checks")) {
        CheckResult c;
        c.name = jc.at("name").get<std::string>();
        c.anchor = jc.at("anchor").get<std::string>();
        c.hypotheses = jc.at("hypotheses").get<std::vector<std::string>>();
        c.residual = number_from(jc.at("residual"));
        c.tolerance = number_from(jc.at("tolerance"));
        c.status = status_from_string(jc.at("status").get<std::string>());
        for (const auto& x : jc.at("witness").at("point")) c.witness.point.push_back(number_from(x));
        c.witness.slots = jc.at("witness").at("slots").get<std::vector<int>>();
        c.note = jc.value("note", "");
        s.checks.push_back(std::move(c));
      }
      r.scenarios.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::config, std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string report_to_text(const SuiteReport& r) {
  std::ostringstream os;
  for (const auto& [k, v] : r.meta)
    if (k.rfind("runtime_s ", 0) != 0) os << "# " << k << ": " << v << "\n";
  for (const auto& s : r.scenarios) {
    os << "\n== " << s.scenario << "\n";
    for (const auto& c : s.checks) {
      char head[96];
      std::snprintf(head, sizeof head, "  %-4s %-28s", std::string(to_string(c.status)).c_str(), c.name.c_str());
      os << head << " res " << sci(c.residual) << "  tol " << sci(c.tolerance) << "  [" << c.anchor << "]";
      if (!c.note.empty()) os << "  " << c.note;
      if (c.status == Status::fail && !c.witness.point.empty()) {
        os << "  at (";
        for (std::size_t i = 0; i < c.witness.point.size(); ++i) os << (i ? ", " : "") << c.witness.point[i];
        os << ")";
      }
      os << "\n";
    }
  }
  os << "\npass " << r.count(Status::pass) << ", fail " << r.count(Status::fail) << ", skip "
     << r.count(Status::skip) << ", info " << r.count(Status::info) << "\n";
  return os.str();
}

std::map<std::string, std::string> convention_notes() {
  return {
      {"curvature", "R(X,Y,Z,W) = <R_{X,Y}Z, W>, R_{X,Y} = [nabla_X, nabla_Y] - nabla_{[X,Y]_P}; round S2 has R(t,p,t,p) = -1"},
      {"tensors", "covariant slots first; the derivative direction is slot 0"},
      {"forms", "full antisymmetric arrays; d^P is the plain alternation of nabla^P; <w1,w2> = full contraction / k!"},
      {"lie_derivative", "L^P_V = d^P i_V + i_V d^P"},
      {"function_laplacian", "div_P nabla^P f (non-positive spectrum)"},
      {"bivectors", "(A ^ B)Z = <B,Z>A - <A,Z>B; <R^P(X^Y), Z^W> = R^P(X,Y,W,Z)"},
      {"frak_K", "pair coefficient -2"},
  };
}

}  // namespace bochner
