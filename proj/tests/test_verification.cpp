#include <algorithm>
#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "bochner/errors.hpp"
#include "bochner/report.hpp"
#include "bochner/verification.hpp"

using namespace bochner;

namespace {

template <class F>
std::string config_error(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
    return e.what();
  }
  ADD_FAILURE() << "no config error";
  return {};
}

Config small(const std::string& shorthand) {
  Config cfg;
  cfg.seed = 7;
  Scenario s = parse_scenario(shorthand);
  s.seed = cfg.seed;
  s.grid = 8;
  s.quad_grid = 32;
  cfg.scenarios.push_back(s);
  return cfg;
}

const CheckResult& check(const SuiteReport& r, const std::string& name) {
  for (const auto& c : r.scenarios.front().checks)
    if (c.name == name) return c;
  throw std::runtime_error("missing " + name);
}

}  // namespace

TEST(Scenario, ParseKeepsParenthesisedColons) {
  const Scenario s = parse_scenario("T2-flat:P-tilt(0.3):K-cubic(1,0)");
  EXPECT_EQ(s.fixture, "T2-flat");
  EXPECT_EQ(s.label(), "T2-flat:P-tilt(0.3):K-cubic(1,0)");
  EXPECT_NE(config_error([] { parse_scenario("T2-flat:P-id"); }).find("fixture:P-spec:K-spec"), std::string::npos);
}

TEST(Config, UnknownFixtureNamesIt) {
  const Config cfg = parse_config(R"({"scenarios": ["Klein-bottle:P-id:K-0"]})");
  const std::string msg = config_error([&] { run_suite(cfg); });
  EXPECT_NE(msg.find("Klein-bottle"), std::string::npos);
}

TEST(Config, BadKeysAreNamed) {
  EXPECT_NE(config_error([] { parse_config(R"({"sead": 1})"); }).find("sead"), std::string::npos);
  EXPECT_NE(config_error([] { parse_config(R"({"format": "xml"})"); }).find("format"), std::string::npos);
  EXPECT_NE(config_error([] { parse_config("{not json"); }).find("JSON"), std::string::npos);
  config_error([] { parse_config(R"({"scenarios": {}})"); });
  config_error([] { load_config("/nonexistent/config.json"); });
}

TEST(Config, DefaultsApplyToScenarios) {
  const Config cfg = parse_config(
      R"({"seed": 5, "defaults": {"grid": 12, "backend": "fd"},
          "scenarios": ["T2-flat:P-id:K-0", {"scenario": "S2-round:P-id:K-0", "grid": 16}]})");
  ASSERT_EQ(cfg.scenarios.size(), 2u);
  EXPECT_EQ(cfg.seed, 5u);
  EXPECT_EQ(cfg.scenarios[0].grid, 12);
  EXPECT_EQ(cfg.scenarios[0].backend, Backend::fd);
  EXPECT_EQ(cfg.scenarios[1].grid, 16);
}

TEST(Config, BadDegreeAndGrid) {
  Config cfg = small("T2-flat:P-id:K-0");
  cfg.scenarios[0].degrees = {3};
  config_error([&] { run_suite(cfg); });
  cfg.scenarios[0].degrees = {};
  cfg.scenarios[0].grid = 4;
  config_error([&] { run_suite(cfg); });
}

TEST(Suite, EmptyConfigGivesEmptyReport) {
  const SuiteReport r = run_suite(parse_config(R"({"scenarios": []})"));
  EXPECT_TRUE(r.scenarios.empty());
  EXPECT_FALSE(r.any_failed());
}

TEST(Suite, Deterministic) {
  const Config cfg = small("T2-flat:P-proj:K-0");
  EXPECT_EQ(check_bodies_json(run_suite(cfg)), check_bodies_json(run_suite(cfg)));
}

TEST(Suite, SeedChangesFields) {
  Config a = small("T2-flat:P-id:K-cubic(1,0)");
  Config b = a;
  b.seed = b.scenarios[0].seed = 8;
  EXPECT_NE(check_bodies_json(run_suite(a)), check_bodies_json(run_suite(b)));
}

TEST(Suite, EveryCatalogCheckReported) {
  // the Stokes negative control appears only where the Stokes hypothesis fails
  const auto names = [](const SuiteReport& r) {
    std::vector<std::string> out;
    for (const auto& c : r.scenarios.front().checks) out.push_back(c.name);
    return out;
  };
  std::vector<std::string> full;
  for (const auto& c : check_catalog()) full.push_back(c.name);
  std::vector<std::string> held = full;
  held.erase(std::find(held.begin(), held.end(), "stokes.negative_control"));

  const SuiteReport ok = run_suite(small("T2-flat:P-id:K-0"));
  EXPECT_EQ(names(ok), held);
  EXPECT_FALSE(ok.any_failed());
  EXPECT_EQ(names(run_suite(small("T2-flat:P-tilt(0.3):K-0"))), full);
  for (const auto& c : ok.scenarios.front().checks) EXPECT_EQ(c.anchor, find_check(c.name)->anchor);
}

TEST(Suite, SingularStructureSkipsGatedChecks) {
  const SuiteReport r = run_suite(small("T2-flat:P-sing:K-0"));
  EXPECT_TRUE(r.any_failed());
  EXPECT_EQ(check(r, "algebroid.anchor").status, Status::fail);
  for (const char* name : {"prop10.item1", "lemma4", "wei", "bochner", "algebroid.jacobiator"}) {
    const auto& c = check(r, name);
    EXPECT_EQ(c.status, Status::skip) << name;
    EXPECT_TRUE(std::isnan(c.residual)) << name;
  }
}

TEST(Report, JsonRoundTrip) {
  const SuiteReport r = run_suite(small("T2-flat:P-sing:K-0"));
  const SuiteReport back = report_from_json(report_to_json(r));
  EXPECT_EQ(check_bodies_json(back), check_bodies_json(r));
  EXPECT_EQ(back.meta, r.meta);
  EXPECT_EQ(back.count(Status::skip), r.count(Status::skip));
  config_error([] { report_from_json(R"({"meta": {}})"); });
}

TEST(Report, TextSummary) {
  const SuiteReport r = run_suite(small("T2-flat:P-proj:K-0"));
  const std::string t = report_to_text(r);
  EXPECT_NE(t.find("== T2-flat:P-proj:K-0"), std::string::npos);
  EXPECT_NE(t.find("fail 0"), std::string::npos);
}

TEST(Status, StringRoundTrip) {
  for (Status s : {Status::pass, Status::fail, Status::skip, Status::info})
    EXPECT_EQ(status_from_string(to_string(s)), s);
  config_error([] { status_from_string("maybe"); });
}
