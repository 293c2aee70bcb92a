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

// Enforcement point: wraps the decision point, keeps granted sessions, and
// re-authorizes every active session whenever context or policy changes.

#include <cstdint>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "caac/context_repository.hpp"
#include "caac/pdp.hpp"
#include "caac/policy_model.hpp"
#include "caac/query.hpp"

namespace caac::pep {

enum class SessionStatus : std::uint8_t { kActive, kRevoked };

inline std::string_view ToString(SessionStatus s) {
  return s == SessionStatus::kActive ? "Active" : "Revoked";
}

struct SessionGrant {
  std::string id;
  pdp::AccessRequest request;
  csl::EntityBindings bindings;  // extra bindings beyond User/Owner
  std::uint64_t store_version = 0;
  std::uint64_t context_version = 0;
  SessionStatus status = SessionStatus::kActive;
};

struct DecisionResponse {
  pdp::AccessDecision decision;
  std::optional<std::string> session;
};

struct DecisionLogEntry {
  pdp::AccessRequest request;
  policy::Decision outcome;
  pdp::Reason reason;
  std::uint64_t store_version;
  std::uint64_t context_version;
};

struct AdminResult {
  std::uint64_t store_version = 0;
  std::vector<std::string> revoked;
};

class PepService {
 public:
  // User profile attributes seed the repository where no fact exists yet.
  PepService(policy::PolicyStore store, context::ContextRepository repository)
      : store_(std::move(store)), repository_(std::move(repository)) {
    for (const auto& [id, user] : store_.users()) SeedProfile(user);
  }

  // Requests may add bindings for extra entity roles (e.g. Environment);
  // User and Owner always come from the request and the resource record.
  DecisionResponse HandleAccessRequest(const pdp::AccessRequest& request,
                                       const csl::EntityBindings& extra = {}) {
    for (const auto& role : {"User", "Owner"}) {
      if (extra.contains(role)) {
        throw SchemaError(std::string("binding for '") + role + "' cannot be overridden");
      }
    }
    {
      std::shared_lock lock(mutex_);
      DecisionResponse r = Decide(request, extra);
      if (r.decision.outcome == policy::Decision::kDenied) {
        Log(request, r.decision);
        return r;
      }
    }
    // Granted: recompute under the writer lock so the new session is
    // consistent with the versions it records.
    std::unique_lock lock(mutex_);
    DecisionResponse r = Decide(request, extra);
    Log(request, r.decision);
    if (r.decision.outcome == policy::Decision::kGranted) {
      SessionGrant s;
      s.id = NextSessionId();
      s.request = request;
      s.bindings = extra;
      s.store_version = store_.version();
      s.context_version = repository_.version();
      r.session = s.id;
      sessions_.emplace(s.id, std::move(s));
    }
    return r;
  }

  // Stores the fact and returns the sessions it revoked, ordered by id.
  std::vector<std::string> HandleContextUpdate(const std::string& entity,
                                               const std::string& attribute,
                                               csl::FactValue value) {
    std::unique_lock lock(mutex_);
    repository_.Put(entity, attribute, std::move(value));
    return Reauthorize();
  }

  AdminResult HandlePolicyAdmin(std::span<const policy::Change> changes,
                                const policy::MutationOptions& options = {}) {
    std::unique_lock lock(mutex_);
    policy::PolicyStore next = policy::Mutate(store_, changes, options);
    store_ = std::move(next);
    for (const auto& c : changes) {
      if (const auto* add = std::get_if<policy::change::AddUser>(&c)) SeedProfile(add->user);
    }
    AdminResult result;
    result.revoked = Reauthorize();
    result.store_version = store_.version();
    return result;
  }

  std::vector<SessionGrant> Sessions() const {
    std::shared_lock lock(mutex_);
    std::vector<SessionGrant> out;
    for (const auto& [id, s] : sessions_) out.push_back(s);
    return out;
  }

  std::vector<query::AuthorizationTuple> Query(const query::AuthorizationFilter& filter) const {
    std::shared_lock lock(mutex_);
    return query::SelectAuthorizations(store_, repository_.Snapshot(), filter);
  }

  std::vector<DecisionLogEntry> DecisionLog() const {
    std::lock_guard lock(log_mutex_);
    return log_;
  }

  // Fresh decision with no session side effects.
  pdp::AccessDecision Evaluate(const pdp::AccessRequest& request,
                               const csl::EntityBindings& extra = {},
                               bool trace = false) const {
    std::shared_lock lock(mutex_);
    return pdp::Authorize(store_, repository_.Snapshot(), request, Bindings(request, extra),
                          {.trace = trace});
  }

  policy::PolicyStore store() const {
    std::shared_lock lock(mutex_);
    return store_;
  }

  context::ContextSnapshot snapshot() const {
    std::shared_lock lock(mutex_);
    return repository_.Snapshot();
  }

 private:
  csl::EntityBindings Bindings(const pdp::AccessRequest& request,
                               const csl::EntityBindings& extra) const {
    csl::EntityBindings b = pdp::DefaultBindings(store_, request);
    b.insert(extra.begin(), extra.end());
    return b;
  }

  DecisionResponse Decide(const pdp::AccessRequest& request,
                          const csl::EntityBindings& extra) const {
    return {pdp::Authorize(store_, repository_.Snapshot(), request, Bindings(request, extra)),
            std::nullopt};
  }

  void Log(const pdp::AccessRequest& request, const pdp::AccessDecision& d) {
    std::lock_guard lock(log_mutex_);
    log_.push_back({request, d.outcome, d.reason, store_.version(), repository_.version()});
  }

  void SeedProfile(const policy::UserRecord& user) {
    for (const auto& [attribute, value] : user.attributes) {
      if (context::FindFact(repository_.facts(), user.id, attribute) == nullptr) {
        repository_.Put(user.id, attribute, value);
      }
    }
  }

  // Caller holds the writer lock.
  std::vector<std::string> Reauthorize() {
    const context::ContextSnapshot snap = repository_.Snapshot();
    std::vector<std::string> revoked;
    for (auto& [id, s] : sessions_) {
      if (s.status != SessionStatus::kActive) continue;
      bool granted = false;
      try {
        granted = pdp::Authorize(store_, snap, s.request, Bindings(s.request, s.bindings))
                      .outcome == policy::Decision::kGranted;
      } catch (const UnknownTarget&) {
        granted = false;  // user or resource no longer exists
      }
      if (granted) {
        s.store_version = store_.version();
        s.context_version = repository_.version();
      } else {
        s.status = SessionStatus::kRevoked;
        revoked.push_back(id);
      }
    }
    return revoked;
  }

  std::string NextSessionId() {
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(++next_session_));
    return buf;
  }

  mutable std::shared_mutex mutex_;
  policy::PolicyStore store_;
  context::ContextRepository repository_;
  std::map<std::string, SessionGrant> sessions_;
  std::uint64_t next_session_ = 0;

  mutable std::mutex log_mutex_;
  std::vector<DecisionLogEntry> log_;
};

}  // namespace caac::pep
