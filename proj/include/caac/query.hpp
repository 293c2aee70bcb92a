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

// Selection over the materialized authorization relation
// (user, role, action, decision).

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "caac/context_repository.hpp"
#include "caac/pdp.hpp"
#include "caac/policy_model.hpp"

namespace caac::query {

using policy::Decision;

struct AuthorizationTuple {
  std::string user;
  std::string role;
  std::string action;
  Decision decision = Decision::kGranted;

  auto Key() const { return std::tie(user, role, action, decision); }
  friend bool operator==(const AuthorizationTuple& a, const AuthorizationTuple& b) {
    return a.Key() == b.Key();
  }
  friend bool operator<(const AuthorizationTuple& a, const AuthorizationTuple& b) {
    return a.Key() < b.Key();
  }
};

// Debugging variant that keeps the policy's resource.
struct AuthorizationRow {
  std::string user;
  std::string role;
  std::string resource;
  std::string action;
  Decision decision = Decision::kGranted;

  auto Key() const { return std::tie(user, role, action, decision, resource); }
  friend bool operator==(const AuthorizationRow& a, const AuthorizationRow& b) {
    return a.Key() == b.Key();
  }
  friend bool operator<(const AuthorizationRow& a, const AuthorizationRow& b) {
    return a.Key() < b.Key();
  }
};

// Conjunctive equality filter; unset fields match anything.
struct AuthorizationFilter {
  std::optional<std::string> user;
  std::optional<std::string> role;
  std::optional<std::string> action;
  std::optional<std::string> decision;

  template <class Row>
  bool Matches(const Row& t) const {
    return (!user || *user == t.user) && (!role || *role == t.role) &&
           (!action || *action == t.action) &&
           (!decision || *decision == policy::ToString(t.decision));
  }
};

// A row exists when a CAURA policy activates (user, role) and a CARPA
// policy held by the role or one of its juniors has a True condition under
// {User -> user, Owner -> owner of the policy's resource}.
inline std::vector<AuthorizationRow> SelectAuthorizationsWithResource(
    const policy::PolicyStore& store, const context::ContextSnapshot& snapshot,
    const AuthorizationFilter& filter = {}) {
  std::set<AuthorizationRow> rows;
  for (const auto& [user, record] : store.users()) {
    if (filter.user && *filter.user != user) continue;
    for (const auto& role : pdp::ActiveRoles(store, snapshot, user)) {
      if (filter.role && *filter.role != role) continue;
      for (const auto& junior : store.SeniorClosure(role)) {
        for (const policy::CarpaPolicy* p : store.CarpaForRole(junior)) {
          const auto& res = store.resources().at(p->permission.resource);
          const csl::EntityBindings bindings{{"User", user}, {"Owner", res.owner}};
          if (pdp::EvaluateCondition("CARPA", p->id, p->condition, snapshot, bindings,
                                     nullptr, nullptr) != csl::Truth::kTrue) {
            continue;
          }
          AuthorizationRow row{user, role, p->permission.resource, p->permission.operation,
                               p->decision};
          if (filter.Matches(row)) rows.insert(std::move(row));
        }
      }
    }
  }
  return {rows.begin(), rows.end()};
}

// Rows ordered by (user, role, action); resources projected out.
inline std::vector<AuthorizationTuple> SelectAuthorizations(
    const policy::PolicyStore& store, const context::ContextSnapshot& snapshot,
    const AuthorizationFilter& filter = {}) {
  std::set<AuthorizationTuple> tuples;
  for (auto& r : SelectAuthorizationsWithResource(store, snapshot, filter)) {
    tuples.insert({std::move(r.user), std::move(r.role), std::move(r.action), r.decision});
  }
  return {tuples.begin(), tuples.end()};
}

inline std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string ToCsv(const std::vector<AuthorizationTuple>& tuples) {
  std::ostringstream out;
  out << "user,role,action,decision\n";
  for (const auto& t : tuples) {
    out << CsvField(t.user) << ',' << CsvField(t.role) << ',' << CsvField(t.action) << ','
        << policy::ToString(t.decision) << '\n';
  }
  return out.str();
}

}  // namespace caac::query
