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

// Decision point: context-aware user-role activation followed by
// role-permission authorization with role/resource hierarchy closure,
// deny-overrides combination and default deny.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "caac/context_repository.hpp"
#include "caac/csl.hpp"
#include "caac/error.hpp"
#include "caac/policy_model.hpp"

namespace caac::pdp {

using policy::Decision;
using policy::IdSet;

struct AccessRequest {
  std::string user;
  std::string resource;
  std::string operation;

  friend bool operator==(const AccessRequest&, const AccessRequest&) = default;
};

enum class Reason : std::uint8_t {
  kNoActiveRole,
  kNoApplicablePolicy,
  kDenyPolicy,
  kOperationNotAssigned,
  kGranted,
};

inline std::string_view ToString(Reason r) {
  switch (r) {
    case Reason::kNoActiveRole: return "NoActiveRole";
    case Reason::kNoApplicablePolicy: return "NoApplicablePolicy";
    case Reason::kDenyPolicy: return "DenyPolicy";
    case Reason::kOperationNotAssigned: return "OperationNotAssigned";
    case Reason::kGranted: return "Granted";
  }
  return "?";
}

// Evaluation record of one policy condition.
struct ConditionTrace {
  std::string policy;
  std::string kind;  // "CAURA" or "CARPA"
  csl::Truth value = csl::Truth::kUnknown;
  std::vector<csl::AtomTrace> atoms;
  std::string error;  // set when evaluation raised; the policy did not apply
};

struct AccessDecision {
  Decision outcome = Decision::kDenied;
  Reason reason = Reason::kNoActiveRole;
  IdSet activated_roles;
  std::vector<std::string> matched_policies;
  std::vector<ConditionTrace> trace;
  std::vector<std::string> warnings;
};

// Evaluates a policy condition. Evaluation errors (unbound role, type
// mismatch, unregistered operator, arity mismatch) make the policy not
// applicable and are reported as warnings.
inline csl::Truth EvaluateCondition(std::string_view kind, const std::string& policy_id,
                                    const csl::Expression& condition,
                                    const context::ContextSnapshot& snapshot,
                                    const csl::EntityBindings& bindings,
                                    std::vector<ConditionTrace>* trace,
                                    std::vector<std::string>* warnings) {
  ConditionTrace entry{policy_id, std::string(kind), csl::Truth::kUnknown, {}, {}};
  try {
    entry.value = csl::Evaluate(condition, snapshot, bindings, snapshot.registry(),
                                trace != nullptr ? &entry.atoms : nullptr);
  } catch (const Error& e) {
    entry.value = csl::Truth::kUnknown;
    entry.error = e.what();
    if (warnings != nullptr) {
      warnings->push_back(std::string(kind) + " policy '" + policy_id + "': " + e.what());
    }
  }
  const csl::Truth value = entry.value;
  if (trace != nullptr) trace->push_back(std::move(entry));
  return value;
}

namespace detail {

inline IdSet ActiveRolesImpl(const policy::PolicyStore& store,
                             const context::ContextSnapshot& snapshot,
                             const std::string& user, const csl::EntityBindings& bindings,
                             std::vector<ConditionTrace>* trace,
                             std::vector<std::string>* warnings) {
  IdSet roles;
  for (const policy::CauraPolicy* p : store.CauraForUser(user)) {
    if (EvaluateCondition("CAURA", p->id, p->condition, snapshot, bindings, trace,
                          warnings) == csl::Truth::kTrue) {
      roles.insert(p->role);
    }
  }
  return roles;
}

}  // namespace detail

// Roles whose CAURA condition for `user` is True under {User -> user}.
// Unknown and False conditions leave the role inactive.
inline IdSet ActiveRoles(const policy::PolicyStore& store,
                         const context::ContextSnapshot& snapshot, const std::string& user) {
  if (store.FindUser(user) == nullptr) throw UnknownUser("unknown user '" + user + "'");
  return detail::ActiveRolesImpl(store, snapshot, user, {{"User", user}}, nullptr, nullptr);
}

// {User -> request.user, Owner -> owner of request.resource}.
inline csl::EntityBindings DefaultBindings(const policy::PolicyStore& store,
                                           const AccessRequest& request) {
  csl::EntityBindings b{{"User", request.user}};
  if (const auto* res = store.FindResource(request.resource)) b["Owner"] = res->owner;
  return b;
}

struct AuthorizeOptions {
  bool trace = false;
};

inline AccessDecision Authorize(const policy::PolicyStore& store,
                                const context::ContextSnapshot& snapshot,
                                const AccessRequest& request,
                                const csl::EntityBindings& bindings,
                                const AuthorizeOptions& options = {}) {
  if (request.user.empty() || request.resource.empty() || request.operation.empty()) {
    throw SchemaError("access request needs user, resource and operation");
  }
  if (store.FindUser(request.user) == nullptr) {
    throw UnknownUser("unknown user '" + request.user + "'");
  }
  const policy::ResourceRecord* resource = store.FindResource(request.resource);
  if (resource == nullptr) {
    throw UnknownResource("unknown resource '" + request.resource + "'");
  }

  AccessDecision d;
  auto* trace = options.trace ? &d.trace : nullptr;

  if (!resource->operations.contains(request.operation)) {
    d.reason = Reason::kOperationNotAssigned;
    return d;
  }

  d.activated_roles =
      detail::ActiveRolesImpl(store, snapshot, request.user, bindings, trace, &d.warnings);
  if (d.activated_roles.empty()) {
    d.reason = Reason::kNoActiveRole;
    return d;
  }

  IdSet effective;
  for (const auto& r : d.activated_roles) {
    const IdSet& closure = store.SeniorClosure(r);
    effective.insert(closure.begin(), closure.end());
  }

  std::vector<std::string> granted;
  std::vector<std::string> denied;
  for (const auto& role : effective) {
    for (const policy::CarpaPolicy* p : store.CarpaForRole(role)) {
      if (p->permission.operation != request.operation) continue;
      if (!store.DescendantResources(p->permission.resource).contains(request.resource)) {
        continue;
      }
      if (EvaluateCondition("CARPA", p->id, p->condition, snapshot, bindings, trace,
                            &d.warnings) != csl::Truth::kTrue) {
        continue;
      }
      (p->decision == Decision::kDenied ? denied : granted).push_back(p->id);
    }
  }
  std::sort(granted.begin(), granted.end());
  std::sort(denied.begin(), denied.end());

  if (!denied.empty()) {
    d.reason = Reason::kDenyPolicy;
    d.matched_policies = std::move(denied);
  } else if (!granted.empty()) {
    d.outcome = Decision::kGranted;
    d.reason = Reason::kGranted;
    d.matched_policies = std::move(granted);
  } else {
    d.reason = Reason::kNoApplicablePolicy;
  }
  return d;
}

inline AccessDecision Authorize(const policy::PolicyStore& store,
                                const context::ContextSnapshot& snapshot,
                                const AccessRequest& request,
                                const AuthorizeOptions& options = {}) {
  return Authorize(store, snapshot, request, DefaultBindings(store, request), options);
}

// Human-readable trace. Atom values are listed per evaluated policy; the
// trace is only populated when the decision was made with tracing on.
inline std::string Explain(const AccessDecision& d) {
  std::ostringstream out;
  out << "decision: " << policy::ToString(d.outcome) << " (" << ToString(d.reason) << ")\n";
  out << "activated roles:";
  for (const auto& r : d.activated_roles) out << ' ' << r;
  out << (d.activated_roles.empty() ? " none\n" : "\n");
  out << "matched policies:";
  for (const auto& p : d.matched_policies) out << ' ' << p;
  out << (d.matched_policies.empty() ? " none\n" : "\n");
  for (const auto& t : d.trace) {
    out << t.kind << ' ' << t.policy << ": " << csl::ToString(t.value);
    if (!t.error.empty()) out << " [error: " << t.error << ']';
    out << '\n';
    for (const auto& a : t.atoms) {
      out << "  " << a.atom << " = " << csl::ToString(a.value);
      if (a.value != csl::Truth::kTrue) out << "  <- fails";
      out << '\n';
    }
  }
  for (const auto& w : d.warnings) out << "warning: " << w << '\n';
  return out.str();
}

}  // namespace caac::pdp
