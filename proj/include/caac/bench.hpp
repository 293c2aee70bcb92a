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

#pragma once

// Synthetic policy sets and the response-time scaling benchmark.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "caac/context_repository.hpp"
#include "caac/csl.hpp"
#include "caac/error.hpp"
#include "caac/pdp.hpp"
#include "caac/policy_model.hpp"

namespace caac::bench {

enum class Mode : std::uint8_t { kCaura, kCarpa, kMixed };

inline std::string_view ToString(Mode m) {
  switch (m) {
    case Mode::kCaura: return "CAURA";
    case Mode::kCarpa: return "CARPA";
    case Mode::kMixed: return "Mixed";
  }
  return "?";
}

inline std::optional<Mode> ModeFromString(std::string_view s) {
  if (s == "CAURA" || s == "caura") return Mode::kCaura;
  if (s == "CARPA" || s == "carpa") return Mode::kCarpa;
  if (s == "Mixed" || s == "mixed") return Mode::kMixed;
  return std::nullopt;
}

struct BenchmarkConfig {
  std::vector<int> policy_counts{50, 100, 150, 200, 250, 300, 350, 400, 450, 500};
  int role_count = 138;
  int runs_per_point = 10;
  std::uint64_t seed = 42;
  Mode mode = Mode::kCaura;

  int user_count = 40;
  int patient_count = 10;
  // Policies of the kind not being scaled (e.g. CARPA in CAURA mode).
  int fixed_policy_count = 50;
  int requests_per_run = 2000;
  int concurrency = 1;

  void Validate() const {
    if (policy_counts.empty()) throw SchemaError("benchmark: no policy counts");
    for (std::size_t i = 0; i < policy_counts.size(); ++i) {
      if (policy_counts[i] < 1 || (i > 0 && policy_counts[i] <= policy_counts[i - 1])) {
        throw SchemaError("benchmark: policy counts must be positive and strictly increasing");
      }
    }
    if (runs_per_point < 1) throw SchemaError("benchmark: runs per point must be >= 1");
    if (role_count < 1 || user_count < 1 || patient_count < 1 || requests_per_run < 1 ||
        concurrency < 1) {
      throw SchemaError("benchmark: counts must be positive");
    }
  }
};

// ---------------------------------------------------------------------------
// Generator
// ---------------------------------------------------------------------------

// The fixed attribute vocabulary. User attributes appear in CAURA and CARPA
// conditions, owner (patient) attributes only in CARPA conditions.
struct AttributeSpec {
  const char* name;
  bool on_user;
  std::vector<const char*> values;  // empty: numeric in [lo, hi]
  int lo = 0;
  int hi = 0;
};

inline const std::vector<AttributeSpec>& Vocabulary() {
  static const std::vector<AttributeSpec> vocab = {
      {"locationAddress", true, {"EmergencyRoom", "GeneralWard", "ICU", "Corridor", "Pharmacy"}},
      {"requestTime", true, {"DutyTime", "OffDuty", "OnCall"}},
      {"department", true, {"Cardiology", "Oncology", "Emergency", "Pediatrics"}},
      {"shift", true, {"Day", "Night", "Weekend"}},
      {"yearsOfService", true, {}, 0, 30},
      {"trainingScore", true, {}, 0, 100},
      {"healthStatus", false, {"Critical", "Normal", "Stable"}},
      {"ward", false, {"GeneralWard", "ICU", "EmergencyRoom"}},
      {"insuranceClass", false, {"Public", "Private", "None"}},
      {"heartRate", false, {}, 40, 140},
      {"age", false, {}, 0, 100},
      {"bloodPressure", false, {}, 80, 180},
  };
  return vocab;
}

struct GeneratedUniverse {
  policy::StoreContents base;  // users, roles, resources; no policies
  std::vector<policy::CauraPolicy> caura;
  std::vector<policy::CarpaPolicy> carpa;
  std::string context_json;
  std::vector<pdp::AccessRequest> requests;  // request pool for the benchmark
};

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t Below(std::uint64_t n) { return engine_() % n; }
  bool Chance(int percent) { return Below(100) < static_cast<std::uint64_t>(percent); }
  template <class T>
  const T& Pick(const std::vector<T>& v) { return v[Below(v.size())]; }

 private:
  std::mt19937_64 engine_;
};

inline std::string Id(const char* prefix, int i, int width) {
  std::string n = std::to_string(i);
  if (static_cast<int>(n.size()) < width) n.insert(0, width - n.size(), '0');
  return prefix + n;
}

inline csl::Expression RandomAtom(Rng& rng, bool allow_owner) {
  const auto& vocab = Vocabulary();
  const AttributeSpec* spec = nullptr;
  do {
    spec = &vocab[rng.Below(vocab.size())];
  } while (!spec->on_user && !allow_owner);
  const std::string role = spec->on_user ? "User" : "Owner";
  if (spec->values.empty()) {
    static const csl::RelOp::Kind kOps[] = {csl::RelOp::Kind::kLt, csl::RelOp::Kind::kLe,
                                            csl::RelOp::Kind::kGt, csl::RelOp::Kind::kGe,
                                            csl::RelOp::Kind::kEq, csl::RelOp::Kind::kNe};
    const int v = spec->lo + static_cast<int>(rng.Below(spec->hi - spec->lo + 1));
    return csl::Expression::MakeAtom(csl::ContextRef::Simple(role, spec->name),
                                     csl::RelOp::Builtin(kOps[rng.Below(6)]),
                                     csl::Literal::Number(Decimal::FromInteger(v)));
  }
  const auto kind = rng.Chance(80) ? csl::RelOp::Kind::kEq : csl::RelOp::Kind::kNe;
  return csl::Expression::MakeAtom(
      csl::ContextRef::Simple(role, spec->name), csl::RelOp::Builtin(kind),
      csl::Literal::String(spec->values[rng.Below(spec->values.size())]));
}

// Depth <= max_depth; atoms at the leaves.
inline csl::Expression RandomCondition(Rng& rng, int max_depth, bool allow_owner) {
  if (max_depth <= 1 || rng.Chance(35)) return RandomAtom(rng, allow_owner);
  switch (rng.Below(5)) {
    case 0:
      return csl::Expression::MakeNot(RandomCondition(rng, max_depth - 1, allow_owner));
    case 1:
    case 2:
      return csl::Expression::MakeOr(RandomCondition(rng, max_depth - 1, allow_owner),
                                     RandomCondition(rng, max_depth - 1, allow_owner));
    default:
      return csl::Expression::MakeAnd(RandomCondition(rng, max_depth - 1, allow_owner),
                                      RandomCondition(rng, max_depth - 1, allow_owner));
  }
}

inline int ScaledCount(const BenchmarkConfig& c, bool caura) {
  const int max = c.policy_counts.back();
  switch (c.mode) {
    case Mode::kCaura: return caura ? max : c.fixed_policy_count;
    case Mode::kCarpa: return caura ? c.fixed_policy_count : max;
    case Mode::kMixed: return caura ? (max + 1) / 2 : max / 2;
  }
  return max;
}

}  // namespace detail

inline constexpr int kMaxConditionDepth = 3;

// Deterministic for a given config. Policies are generated for the largest
// count; smaller counts use prefixes.
inline GeneratedUniverse GenerateUniverse(const BenchmarkConfig& config) {
  config.Validate();
  detail::Rng rng(config.seed);
  GeneratedUniverse u;
  const auto& vocab = Vocabulary();
  nlohmann::json facts = nlohmann::json::array();
  auto fact = [&](const std::string& entity, const AttributeSpec& spec) {
    nlohmann::json value;
    if (spec.values.empty()) {
      value = spec.lo + static_cast<int>(rng.Below(spec.hi - spec.lo + 1));
    } else {
      value = spec.values[rng.Below(spec.values.size())];
    }
    facts.push_back({{"entity", entity}, {"attribute", spec.name}, {"value", value}});
  };

  std::vector<std::string> users;
  for (int i = 0; i < config.user_count; ++i) {
    users.push_back(detail::Id("U", i, 3));
    u.base.users[users.back()] = {users.back(), {}};
    for (const auto& spec : vocab) {
      if (spec.on_user) fact(users.back(), spec);
    }
  }

  std::vector<std::string> roles;
  for (int i = 0; i < config.role_count; ++i) roles.push_back(detail::Id("R", i, 3));
  for (int i = 0; i < config.role_count; ++i) {
    policy::RoleRecord role{roles[i], {}};
    // Juniors only point to higher indices, so the hierarchy is acyclic.
    if (i + 1 < config.role_count && rng.Chance(30)) {
      const int j = i + 1 + static_cast<int>(rng.Below(config.role_count - i - 1));
      role.juniors.insert(roles[j]);
    }
    u.base.roles[role.id] = std::move(role);
  }

  std::vector<std::string> resources;
  for (int p = 0; p < config.patient_count; ++p) {
    const std::string patient = detail::Id("P", p, 2);
    for (const auto& spec : vocab) {
      if (!spec.on_user) fact(patient, spec);
    }
    const std::string root = "MR_" + patient;
    policy::ResourceRecord record{root, patient, {}, {"read", "write"}};
    for (const char* part : {"EMR_", "DMR_", "PMR_"}) {
      const std::string id = part + patient;
      u.base.resources[id] = {id, patient, {}, {"read", "write"}};
      record.children.insert(id);
      resources.push_back(id);
    }
    u.base.resources[root] = std::move(record);
    resources.push_back(root);
  }

  const int caura_count = detail::ScaledCount(config, true);
  const int carpa_count = detail::ScaledCount(config, false);
  for (int i = 0; i < caura_count; ++i) {
    u.caura.push_back({detail::Id("caura_", i, 4), rng.Pick(users), rng.Pick(roles),
                       detail::RandomCondition(rng, kMaxConditionDepth, false)});
  }
  for (int i = 0; i < carpa_count; ++i) {
    u.carpa.push_back({detail::Id("carpa_", i, 4), rng.Pick(roles),
                       {rng.Pick(resources), rng.Chance(50) ? "read" : "write"},
                       detail::RandomCondition(rng, kMaxConditionDepth, true),
                       rng.Chance(85) ? policy::Decision::kGranted : policy::Decision::kDenied});
  }
  for (int i = 0; i < 256; ++i) {
    u.requests.push_back(
        {rng.Pick(users), rng.Pick(resources), rng.Chance(50) ? "read" : "write"});
  }
  u.context_json = nlohmann::json{{"facts", facts}, {"rules", nlohmann::json::array()}}.dump(2) + "\n";
  return u;
}

// Store holding the first `count` policies of the scaled kind.
inline policy::PolicyStore BuildStore(const GeneratedUniverse& u, const BenchmarkConfig& config,
                                      int count) {
  policy::StoreContents c = u.base;
  int caura_n = static_cast<int>(u.caura.size());
  int carpa_n = static_cast<int>(u.carpa.size());
  switch (config.mode) {
    case Mode::kCaura: caura_n = std::min(caura_n, count); break;
    case Mode::kCarpa: carpa_n = std::min(carpa_n, count); break;
    case Mode::kMixed:
      caura_n = std::min(caura_n, (count + 1) / 2);
      carpa_n = std::min(carpa_n, count / 2);
      break;
  }
  for (int i = 0; i < caura_n; ++i) c.caura[u.caura[i].id] = u.caura[i];
  for (int i = 0; i < carpa_n; ++i) c.carpa[u.carpa[i].id] = u.carpa[i];
  return policy::PolicyStore(std::move(c));
}

// Policy file with the largest configured count.
inline std::string GeneratePolicySet(const BenchmarkConfig& config) {
  const GeneratedUniverse u = GenerateUniverse(config);
  return policy::SaveStore(BuildStore(u, config, config.policy_counts.back()));
}

// ---------------------------------------------------------------------------
// Benchmark
// ---------------------------------------------------------------------------

struct BenchmarkRow {
  int policies = 0;
  double mean_ms = 0;
  double stddev_ms = 0;
  std::uint64_t store_bytes = 0;

  friend bool operator==(const BenchmarkRow&, const BenchmarkRow&) = default;
};

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
  LinearFit fit;
  int concurrency = 1;
};

// One recorded decision, for replay checks.
struct DecisionSample {
  int policies = 0;
  pdp::AccessRequest request;
  policy::Decision outcome = policy::Decision::kDenied;
};

// Least-squares line through (x, y); r2 is the coefficient of
// determination (1 when y is constant and the fit is exact).
inline LinearFit FitLine(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

inline BenchmarkReport RunBenchmark(const BenchmarkConfig& config,
                                    std::vector<DecisionSample>* samples = nullptr) {
  const GeneratedUniverse u = GenerateUniverse(config);
  const context::ContextSnapshot snapshot =
      context::ContextRepository::Load(u.context_json).Snapshot();
  BenchmarkReport report;
  report.concurrency = config.concurrency;
  detail::Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  for (int count : config.policy_counts) {
    const policy::PolicyStore store = BuildStore(u, config, count);
    for (int i = 0; i < config.requests_per_run; ++i) {
      volatile auto warm = pdp::Authorize(store, snapshot, rng.Pick(u.requests)).outcome;
      (void)warm;
    }
    std::vector<double> run_ms;
    for (int run = 0; run < config.runs_per_point; ++run) {
      std::vector<pdp::AccessRequest> batch;
      for (int i = 0; i < config.requests_per_run; ++i) batch.push_back(rng.Pick(u.requests));
      if (samples != nullptr && run == 0) {
        for (std::size_t i = 0; i < std::min<std::size_t>(4, batch.size()); ++i) {
          samples->push_back(
              {count, batch[i], pdp::Authorize(store, snapshot, batch[i]).outcome});
        }
      }
      std::size_t granted = 0;
      auto work = [&](std::size_t begin, std::size_t end, std::size_t* out) {
        std::size_t g = 0;
        for (std::size_t i = begin; i < end; ++i) {
          g += pdp::Authorize(store, snapshot, batch[i]).outcome == policy::Decision::kGranted;
        }
        *out = g;
      };
      const auto start = std::chrono::steady_clock::now();
      if (config.concurrency == 1) {
        work(0, batch.size(), &granted);
      } else {
        std::vector<std::thread> threads;
        std::vector<std::size_t> counts(config.concurrency);
        const std::size_t per = (batch.size() + config.concurrency - 1) / config.concurrency;
        for (int t = 0; t < config.concurrency; ++t) {
          const std::size_t b = std::min(batch.size(), t * per);
          const std::size_t e = std::min(batch.size(), b + per);
          threads.emplace_back(work, b, e, &counts[t]);
        }
        for (auto& t : threads) t.join();
        for (auto c : counts) granted += c;
      }
      const auto stop = std::chrono::steady_clock::now();
      volatile std::size_t sink = granted;
      (void)sink;
      run_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count() /
                       static_cast<double>(batch.size()));
    }
    BenchmarkRow row;
    row.policies = count;
    for (double v : run_ms) row.mean_ms += v;
    row.mean_ms /= static_cast<double>(run_ms.size());
    for (double v : run_ms) row.stddev_ms += (v - row.mean_ms) * (v - row.mean_ms);
    row.stddev_ms = std::sqrt(row.stddev_ms / static_cast<double>(run_ms.size()));
    row.store_bytes = policy::SaveStore(store).size();
    report.rows.push_back(row);
  }

  std::vector<double> xs, ys;
  for (const auto& r : report.rows) {
    xs.push_back(r.policies);
    ys.push_back(r.mean_ms);
  }
  report.fit = FitLine(xs, ys);
  return report;
}

// Shortest representation that parses back to the same double.
inline std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline constexpr std::string_view kCsvHeader = "policies,mean_ms,stddev_ms,store_bytes";

inline std::string ToCsv(const BenchmarkReport& report) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : report.rows) {
    out += std::to_string(r.policies) + "," + FormatDouble(r.mean_ms) + "," +
           FormatDouble(r.stddev_ms) + "," + std::to_string(r.store_bytes) + "\n";
  }
  return out;
}

inline std::string Summary(const BenchmarkReport& report) {
  return "slope_ms_per_policy=" + FormatDouble(report.fit.slope) +
         " intercept_ms=" + FormatDouble(report.fit.intercept) +
         " r2=" + FormatDouble(report.fit.r2) +
         " concurrency=" + std::to_string(report.concurrency) + "\n";
}

inline std::vector<BenchmarkRow> ParseCsv(std::string_view text) {
  std::vector<BenchmarkRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ParseError("benchmark CSV: missing header");
  }
  auto number = [](std::string_view s, auto& out) {
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || end != s.data() + s.size()) {
      throw ParseError("benchmark CSV: bad number '" + std::string(s) + "'");
    }
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (std::size_t c; (c = rest.find(',')) != std::string_view::npos; rest.remove_prefix(c + 1)) {
      f.push_back(rest.substr(0, c));
    }
    f.push_back(rest);
    if (f.size() != 4) throw ParseError("benchmark CSV: expected 4 fields");
    BenchmarkRow r;
    number(f[0], r.policies);
    number(f[1], r.mean_ms);
    number(f[2], r.stddev_ms);
    number(f[3], r.store_bytes);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace caac::bench
