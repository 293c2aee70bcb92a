// Copyright 2026 The CAAC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "caac/bench.hpp"
#include "caac/pep_service.hpp"
#include "caac/scenario.hpp"
#include "test_util.hpp"

namespace caac {
namespace {

pep::PepService HealthcareService() {
  return pep::PepService(
      policy::LoadStore(testing::ReadFixture("healthcare/policies.json")),
      context::ContextRepository::Load(testing::ReadFixture("healthcare/context.json")));
}

TEST(Scenario, ShippedScenesMatchExpectedTranscripts) {
  for (const std::string scene : {"scene1", "scene2"}) {
    pep::PepService service = HealthcareService();
    const auto result = scenario::RunScenario(
        service, testing::ReadFixture("healthcare/" + scene + ".script"), scene);
    EXPECT_TRUE(result.ok()) << result.transcript;
    EXPECT_EQ(result.transcript, testing::ReadFixture("healthcare/" + scene + ".expected"));
  }
}

TEST(Scenario, EmptyScript) {
  pep::PepService service = HealthcareService();
  const auto result = scenario::RunScenario(service, "");
  EXPECT_TRUE(result.ok());
  EXPECT_EQ(result.transcript, "");
  EXPECT_TRUE(scenario::RunScenario(service, "# only a comment\n\n").transcript.empty());
}

TEST(Scenario, FailedExpectationsAreCounted) {
  pep::PepService service = HealthcareService();
  const auto result =
      scenario::RunScenario(service, "REQ Jane01 EMR write\nEXPECT Granted\n");
  EXPECT_EQ(result.failed_expectations, 1);
  EXPECT_NE(result.transcript.find("EXPECT Granted -> FAILED (got Denied)"), std::string::npos);
}

TEST(Scenario, ValuesAndUnknownEntities) {
  pep::PepService service = HealthcareService();
  const auto result = scenario::RunScenario(service,
                                            "CTX Bob01 heartRate 64.5\n"
                                            "CTX Bob01 nickname \"Bobby B\"\n"
                                            "CTX Bob01 ward ICU\n"
                                            "CTX Ann tags [a, \"b c\", 3]\n"
                                            "REQ Ghost EMR write\n");
  EXPECT_EQ(result.transcript,
            "CTX Bob01 heartRate 64.5 -> revoked=-\n"
            "CTX Bob01 nickname \"Bobby B\" -> revoked=-\n"
            "CTX Bob01 ward \"ICU\" -> revoked=-\n"
            "CTX Ann tags [\"a\", \"b c\", 3] -> revoked=-\n"
            "REQ Ghost EMR write -> error: unknown user 'Ghost'\n");
  EXPECT_EQ(std::get<csl::Literal>(*service.snapshot().Lookup("Bob01", "heartRate")),
            testing::Num("64.5"));
}

TEST(Scenario, ParseErrorsCarryLocation) {
  pep::PepService service = HealthcareService();
  auto error_of = [&](const std::string& script) {
    try {
      scenario::RunScenario(service, script, "t.script");
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(error_of("REQ a b\n").rfind("t.script:1:", 0), 0u);
  EXPECT_EQ(error_of("\n\nFLY away\n").rfind("t.script:3:", 0), 0u);
  EXPECT_EQ(error_of("EXPECT Granted\n").rfind("t.script:1:", 0), 0u);
  EXPECT_EQ(error_of("REQ Jane01 EMR write\nEXPECT Maybe\n").rfind("t.script:2:", 0), 0u);
  EXPECT_EQ(error_of("CTX e a \"open\n").rfind("t.script:1:", 0), 0u);
}

bench::BenchmarkConfig SmallConfig(std::uint64_t seed = 42) {
  bench::BenchmarkConfig c;
  c.policy_counts = {10, 20, 30};
  c.role_count = 12;
  c.runs_per_point = 2;
  c.requests_per_run = 50;
  c.seed = seed;
  return c;
}

TEST(Generator, Deterministic) {
  bench::BenchmarkConfig c;
  c.policy_counts = {50};
  EXPECT_EQ(bench::GeneratePolicySet(c), bench::GeneratePolicySet(c));
  EXPECT_EQ(bench::GenerateUniverse(c).context_json, bench::GenerateUniverse(c).context_json);
  c.seed = 43;
  bench::BenchmarkConfig d;
  d.policy_counts = {50};
  EXPECT_NE(bench::GeneratePolicySet(c), bench::GeneratePolicySet(d));
}

// Every generated condition parses back and evaluates without error for
// every user and every resource under the generated facts.
TEST(Generator, SelfValidation) {
  for (auto mode : {bench::Mode::kCaura, bench::Mode::kCarpa, bench::Mode::kMixed}) {
    bench::BenchmarkConfig c;
    c.mode = mode;
    c.policy_counts = {200};
    const auto u = bench::GenerateUniverse(c);
    const policy::PolicyStore store = policy::LoadStore(bench::GeneratePolicySet(c));
    const auto snap = context::ContextRepository::Load(u.context_json).Snapshot();
    int evaluated = 0;
    for (const auto& [id, p] : store.caura()) {
      EXPECT_LE(p.condition.depth(), bench::kMaxConditionDepth);
      EXPECT_NO_THROW(csl::Evaluate(p.condition, snap, {{"User", p.user}})) << id;
      ++evaluated;
    }
    for (const auto& [id, p] : store.carpa()) {
      EXPECT_LE(p.condition.depth(), bench::kMaxConditionDepth);
      for (const auto& [uid, user] : store.users()) {
        const csl::EntityBindings b{{"User", uid},
                                    {"Owner", store.resources().at(p.permission.resource).owner}};
        ASSERT_NE(csl::Evaluate(p.condition, snap, b), csl::Truth::kUnknown) << id;
      }
      ++evaluated;
    }
    EXPECT_EQ(evaluated, mode == bench::Mode::kMixed ? 200 : 200 + c.fixed_policy_count);
    for (const auto& req : u.requests) {
      const auto d = pdp::Authorize(store, snap, req);
      EXPECT_TRUE(d.warnings.empty());
    }
  }
}

TEST(Generator, FullScaleLoads) {
  bench::BenchmarkConfig c;
  c.policy_counts = {500};
  c.role_count = 138;
  const auto u = bench::GenerateUniverse(c);
  const policy::PolicyStore store = policy::LoadStore(bench::GeneratePolicySet(c));
  EXPECT_EQ(store.roles().size(), 138u);
  EXPECT_EQ(store.caura().size(), 500u);
  const auto snap = context::ContextRepository::Load(u.context_json).Snapshot();
  int granted = 0;
  for (const auto& req : u.requests) {
    granted += pdp::Authorize(store, snap, req).outcome == policy::Decision::kGranted;
  }
  EXPECT_GT(granted, 0);
}

TEST(Generator, ConfigValidation) {
  bench::BenchmarkConfig c;
  c.policy_counts = {100, 50};
  EXPECT_THROW(c.Validate(), SchemaError);
  c.policy_counts = {50, 50};
  EXPECT_THROW(c.Validate(), SchemaError);
  c.policy_counts = {50};
  c.runs_per_point = 0;
  EXPECT_THROW(c.Validate(), SchemaError);
  EXPECT_EQ(bench::ModeFromString("Mixed"), bench::Mode::kMixed);
  EXPECT_EQ(bench::ModeFromString("mixed"), bench::Mode::kMixed);
  EXPECT_FALSE(bench::ModeFromString("MIX"));
}

TEST(Benchmark, OneRowPerCount) {
  const auto report = bench::RunBenchmark(SmallConfig());
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_EQ(report.rows[0].policies, 10);
  EXPECT_EQ(report.rows[2].policies, 30);
  EXPECT_LT(report.rows[0].store_bytes, report.rows[2].store_bytes);
  for (const auto& r : report.rows) EXPECT_GT(r.mean_ms, 0);
}

TEST(Benchmark, SingleRunHasZeroStddev) {
  bench::BenchmarkConfig c = SmallConfig();
  c.policy_counts = {25};
  c.runs_per_point = 1;
  const auto report = bench::RunBenchmark(c);
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_EQ(report.rows[0].stddev_ms, 0.0);
}

TEST(Benchmark, CsvRoundTrip) {
  const auto report = bench::RunBenchmark(SmallConfig());
  const std::string csv = bench::ToCsv(report);
  EXPECT_EQ(csv.rfind("policies,mean_ms,stddev_ms,store_bytes\n", 0), 0u);
  EXPECT_EQ(bench::ParseCsv(csv), report.rows);
  EXPECT_THROW(bench::ParseCsv("nope\n"), ParseError);
  EXPECT_THROW(bench::ParseCsv("policies,mean_ms,stddev_ms,store_bytes\n1,2\n"), ParseError);
}

TEST(Benchmark, ConcurrencyIsReported) {
  bench::BenchmarkConfig c = SmallConfig();
  c.concurrency = 3;
  const auto report = bench::RunBenchmark(c);
  EXPECT_EQ(report.concurrency, 3);
  EXPECT_NE(bench::Summary(report).find("concurrency=3"), std::string::npos);
}

TEST(Benchmark, FitLine) {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> y = {3, 5, 7, 9};
  const auto f = bench::FitLine(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  const std::vector<double> noisy = {1, 3, 2, 4};
  const auto g = bench::FitLine(x, noisy);
  // Closed form for this data: slope 0.8, r2 0.64.
  EXPECT_NEAR(g.slope, 0.8, 1e-12);
  EXPECT_NEAR(g.r2, 0.64, 1e-12);
}

// Decisions made while benchmarking equal the same requests replayed
// through a scenario against the generated files.
TEST(Benchmark, DecisionsReplayThroughScenario) {
  const bench::BenchmarkConfig c = SmallConfig(7);
  std::vector<bench::DecisionSample> samples;
  bench::RunBenchmark(c, &samples);
  ASSERT_FALSE(samples.empty());
  const auto u = bench::GenerateUniverse(c);
  for (const auto& s : samples) {
    pep::PepService service(
        policy::LoadStore(policy::SaveStore(bench::BuildStore(u, c, s.policies))),
        context::ContextRepository::Load(u.context_json));
    const std::string script = "REQ " + s.request.user + " " + s.request.resource + " " +
                               s.request.operation + "\nEXPECT " +
                               std::string(policy::ToString(s.outcome)) + "\n";
    const auto result = scenario::RunScenario(service, script);
    EXPECT_TRUE(result.ok()) << result.transcript;
  }
}

}  // namespace
}  // namespace caac
