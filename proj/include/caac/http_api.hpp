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

// HTTP/JSON surface of the enforcement point.
//
//   POST /v1/decision             {"user","resource","operation","bindings"?}
//   POST /v1/context              {"entity","attribute","value"}
//   POST /v1/admin/policy         change object or array of change objects
//   GET  /v1/sessions
//   GET  /v1/query/authorizations?user=&role=&action=&decision=   (CSV)
//
// Policy denials are 200 responses; 4xx is reserved for malformed input
// (400) and unknown users/resources on decision requests (404).

#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "caac/error.hpp"
#include "caac/json_util.hpp"
#include "caac/pep_service.hpp"
#include "caac/query.hpp"

namespace caac::http {

using nlohmann::json;

inline json DecisionToJson(const pep::DecisionResponse& r) {
  json j{{"outcome", policy::ToString(r.decision.outcome)},
         {"reason", pdp::ToString(r.decision.reason)},
         {"activatedRoles", std::vector<std::string>(r.decision.activated_roles.begin(),
                                                     r.decision.activated_roles.end())},
         {"matchedPolicies", r.decision.matched_policies}};
  if (r.session) j["session"] = *r.session;
  return j;
}

inline json SessionsToJson(const std::vector<pep::SessionGrant>& sessions) {
  json arr = json::array();
  for (const auto& s : sessions) {
    arr.push_back({{"session", s.id},
                   {"user", s.request.user},
                   {"resource", s.request.resource},
                   {"operation", s.request.operation},
                   {"status", pep::ToString(s.status)},
                   {"storeVersion", s.store_version},
                   {"contextVersion", s.context_version}});
  }
  return arr;
}

namespace detail {

inline void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void ReplyError(httplib::Response& res, int status, const std::string& message) {
  Reply(res, status, json{{"error", message}});
}

// Runs `fn`, mapping engine errors to status codes.
template <class Fn>
void Guard(httplib::Response& res, int unknown_status, Fn&& fn) {
  try {
    fn();
  } catch (const UnknownTarget& e) {
    ReplyError(res, unknown_status, e.what());
  } catch (const Error& e) {
    ReplyError(res, 400, e.what());
  } catch (const json::exception& e) {
    ReplyError(res, 400, e.what());
  }
}

}  // namespace detail

inline void RegisterRoutes(httplib::Server& server, pep::PepService& service) {
  using detail::Guard;
  using detail::Reply;

  server.Post("/v1/decision", [&service](const httplib::Request& req, httplib::Response& res) {
    Guard(res, 404, [&] {
      const json body = json_util::ParseStrict(req.body, "request body");
      json_util::CheckObject(body, "decision request", {"user", "resource", "operation",
                                                         "bindings"});
      pdp::AccessRequest request{json_util::RequireString(body, "user", "decision request"),
                                 json_util::RequireString(body, "resource", "decision request"),
                                 json_util::RequireString(body, "operation", "decision request")};
      csl::EntityBindings extra;
      if (auto it = body.find("bindings"); it != body.end()) {
        if (!it->is_object()) throw SchemaError("bindings must be an object");
        for (const auto& [role, id] : it->items()) {
          if (!id.is_string()) throw SchemaError("binding '" + role + "' must be a string");
          extra[role] = id.get<std::string>();
        }
      }
      Reply(res, 200, DecisionToJson(service.HandleAccessRequest(request, extra)));
    });
  });

  server.Post("/v1/context", [&service](const httplib::Request& req, httplib::Response& res) {
    Guard(res, 400, [&] {
      const json body = json_util::ParseStrict(req.body, "request body");
      json_util::CheckObject(body, "context update", {"entity", "attribute", "value"});
      auto revoked = service.HandleContextUpdate(
          json_util::RequireString(body, "entity", "context update"),
          json_util::RequireString(body, "attribute", "context update"),
          json_util::FactValueFromJson(json_util::Require(body, "value", "context update"),
                                       "context update"));
      Reply(res, 200, json{{"revoked", revoked}});
    });
  });

  server.Post("/v1/admin/policy",
              [&service](const httplib::Request& req, httplib::Response& res) {
                Guard(res, 400, [&] {
                  const json body = json_util::ParseStrict(req.body, "request body");
                  const auto changes = policy::ChangesFromJson(body);
                  auto result = service.HandlePolicyAdmin(changes);
                  Reply(res, 200, json{{"storeVersion", result.store_version},
                                       {"revoked", result.revoked}});
                });
              });

  server.Get("/v1/sessions", [&service](const httplib::Request&, httplib::Response& res) {
    Reply(res, 200, SessionsToJson(service.Sessions()));
  });

  server.Get("/v1/query/authorizations",
             [&service](const httplib::Request& req, httplib::Response& res) {
               query::AuthorizationFilter filter;
               auto param = [&](const char* name, std::optional<std::string>& field) {
                 if (req.has_param(name)) {
                   std::string v = req.get_param_value(name);
                   if (!v.empty()) field = std::move(v);
                 }
               };
               param("user", filter.user);
               param("role", filter.role);
               param("action", filter.action);
               param("decision", filter.decision);
               res.status = 200;
               res.set_content(query::ToCsv(service.Query(filter)), "text/csv");
             });
}

}  // namespace caac::http
