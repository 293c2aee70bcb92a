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


// caac: command-line front end for the access control engine.

#include <CLI11.hpp>
#include <httplib.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "caac/bench.hpp"
#include "caac/context_repository.hpp"
#include "caac/http_api.hpp"
#include "caac/pep_service.hpp"
#include "caac/policy_model.hpp"
#include "caac/query.hpp"
#include "caac/scenario.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw caac::ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw caac::ParseError(path + ": cannot write file");
  out << text;
}

// Prefixes load errors with the file they came from.
template <class Fn>
auto LoadFrom(const std::string& path, Fn&& fn) {
  const std::string text = ReadFile(path);
  try {
    return fn(text);
  } catch (const caac::Error& e) {
    throw caac::ParseError(path + ": " + e.what());
  }
}

caac::policy::PolicyStore LoadPolicies(const std::string& path) {
  return LoadFrom(path, [](const std::string& t) { return caac::policy::LoadStore(t); });
}

caac::context::ContextRepository LoadContext(const std::string& path) {
  if (path.empty()) return caac::context::ContextRepository();
  return LoadFrom(path, [](const std::string& t) { return caac::context::ContextRepository::Load(t); });
}

std::vector<caac::policy::Change> LoadChanges(const std::string& path) {
  return LoadFrom(path, [](const std::string& t) {
    return caac::policy::ChangesFromJson(caac::json_util::ParseStrict(t, "changes"));
  });
}

std::vector<int> ParseCounts(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw caac::SchemaError("bad count '" + item + "'");
    out.push_back(v);
  }
  return out;
}

struct Options {
  std::string policies;
  std::string context;
  std::string listen = "127.0.0.1:8080";
  std::string script;
  std::string expect;
  std::vector<std::string> admin;
  std::string user, role, action, decision;
  std::string out, context_out;
  std::string counts = "50,100,150,200,250,300,350,400,450,500";
  std::string mode = "CAURA";
  caac::bench::BenchmarkConfig bench;
  int gen_count = 50;
};

int RunValidate(const Options& o) {
  const auto store = LoadPolicies(o.policies);
  std::cout << "policies ok: " << store.users().size() << " users, " << store.roles().size()
            << " roles, " << store.resources().size() << " resources, " << store.caura().size()
            << " caura, " << store.carpa().size() << " carpa\n";
  if (!o.context.empty()) {
    const auto repo = LoadContext(o.context);
    std::size_t facts = 0;
    for (const auto& [entity, attrs] : repo.facts()) facts += attrs.size();
    std::cout << "context ok: " << facts << " facts, " << repo.rules().rules().size()
              << " rules\n";
  }
  return 0;
}

int RunScenario(const Options& o) {
  caac::pep::PepService service(LoadPolicies(o.policies), LoadContext(o.context));
  const auto result = caac::scenario::RunScenario(service, ReadFile(o.script), o.script);
  std::cout << result.transcript;
  int rc = result.ok() ? 0 : kExitFailure;
  if (!result.ok()) {
    std::cerr << result.failed_expectations << " expectation(s) failed\n";
  }
  if (!o.expect.empty() && ReadFile(o.expect) != result.transcript) {
    std::cerr << "transcript does not match " << o.expect << "\n";
    rc = kExitFailure;
  }
  return rc;
}

int RunQuery(const Options& o) {
  caac::pep::PepService service(LoadPolicies(o.policies), LoadContext(o.context));
  if (!o.script.empty()) {
    caac::scenario::RunScenario(service, ReadFile(o.script), o.script);
  }
  for (const auto& path : o.admin) service.HandlePolicyAdmin(LoadChanges(path));
  caac::query::AuthorizationFilter filter;
  auto set = [](std::optional<std::string>& field, const std::string& v) {
    if (!v.empty()) field = v;
  };
  set(filter.user, o.user);
  set(filter.role, o.role);
  set(filter.action, o.action);
  set(filter.decision, o.decision);
  std::cout << caac::query::ToCsv(service.Query(filter));
  return 0;
}

int RunGen(Options o) {
  auto mode = caac::bench::ModeFromString(o.mode);
  if (!mode) throw caac::SchemaError("unknown mode '" + o.mode + "'");
  o.bench.mode = *mode;
  o.bench.policy_counts = {o.gen_count};
  o.bench.Validate();
  const std::string text = caac::bench::GeneratePolicySet(o.bench);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    WriteFile(o.out, text);
  }
  if (!o.context_out.empty()) {
    WriteFile(o.context_out, caac::bench::GenerateUniverse(o.bench).context_json);
  }
  return 0;
}

int RunBench(Options o) {
  auto mode = caac::bench::ModeFromString(o.mode);
  if (!mode) throw caac::SchemaError("unknown mode '" + o.mode + "'");
  o.bench.mode = *mode;
  o.bench.policy_counts = ParseCounts(o.counts);
  o.bench.Validate();
  const auto report = caac::bench::RunBenchmark(o.bench);
  std::cout << caac::bench::ToCsv(report);
  std::cerr << caac::bench::Summary(report);
  return 0;
}

int RunServe(const Options& o) {
  const auto colon = o.listen.rfind(':');
  if (colon == std::string::npos) throw caac::SchemaError("--listen expects host:port");
  const std::string host = o.listen.substr(0, colon);
  const int port = std::stoi(o.listen.substr(colon + 1));
  caac::pep::PepService service(LoadPolicies(o.policies), LoadContext(o.context));
  httplib::Server server;
  caac::http::RegisterRoutes(server, service);
  std::cerr << "listening on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "cannot listen on " << o.listen << "\n";
    return kExitFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-aware access control engine"};
  app.require_subcommand(1);
  Options o;

  auto add_store = [&](CLI::App* cmd, bool context_required) {
    cmd->add_option("--policies", o.policies, "Policy file (JSON)")->required();
    auto* c = cmd->add_option("--context", o.context, "Context file (JSON)");
    if (context_required) c->required();
  };

  auto* validate = app.add_subcommand("validate", "Load and validate policy and context files");
  add_store(validate, false);

  auto* serve = app.add_subcommand("serve", "Run the HTTP enforcement point");
  serve->add_option("--listen", o.listen, "host:port")->envname("CAAC_LISTEN")->capture_default_str();
  serve->add_option("--policies", o.policies, "Policy file (JSON)")
      ->envname("CAAC_POLICIES")
      ->required();
  serve->add_option("--context", o.context, "Context file (JSON)")->envname("CAAC_CONTEXT");

  auto* scenario = app.add_subcommand("scenario", "Run a request/context script");
  add_store(scenario, false);
  scenario->add_option("script", o.script, "Script file")->required();
  scenario->add_option("--expect", o.expect, "Expected transcript; exit 1 on mismatch");

  auto* query = app.add_subcommand("query", "Print the authorization relation as CSV");
  add_store(query, false);
  query->add_option("--script", o.script, "Script applied before querying");
  query->add_option("--admin", o.admin, "Policy change file (repeatable)");
  query->add_option("--user", o.user);
  query->add_option("--role", o.role);
  query->add_option("--action", o.action);
  query->add_option("--decision", o.decision);

  auto* gen = app.add_subcommand("gen", "Generate a synthetic policy set");
  gen->add_option("--seed", o.bench.seed)->capture_default_str();
  gen->add_option("--count", o.gen_count, "Number of scaled policies")->capture_default_str();
  gen->add_option("--roles", o.bench.role_count)->capture_default_str();
  gen->add_option("--users", o.bench.user_count)->capture_default_str();
  gen->add_option("--patients", o.bench.patient_count)->capture_default_str();
  gen->add_option("--mode", o.mode, "CAURA, CARPA or Mixed")->capture_default_str();
  gen->add_option("--out", o.out, "Policy output file (default stdout)");
  gen->add_option("--context-out", o.context_out, "Context output file");

  auto* bench = app.add_subcommand("bench", "Measure decision latency against policy count");
  bench->add_option("--counts", o.counts, "Comma-separated policy counts")->capture_default_str();
  bench->add_option("--roles", o.bench.role_count)->capture_default_str();
  bench->add_option("--runs", o.bench.runs_per_point)->capture_default_str();
  bench->add_option("--seed", o.bench.seed)->capture_default_str();
  bench->add_option("--mode", o.mode, "CAURA, CARPA or Mixed")->capture_default_str();
  bench->add_option("--requests", o.bench.requests_per_run, "Requests per run")
      ->capture_default_str();
  bench->add_option("--concurrency", o.bench.concurrency)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*validate) return RunValidate(o);
    if (*serve) return RunServe(o);
    if (*scenario) return RunScenario(o);
    if (*query) return RunQuery(o);
    if (*gen) return RunGen(o);
    if (*bench) return RunBench(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
