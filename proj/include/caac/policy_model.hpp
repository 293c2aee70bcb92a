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

// Users, roles, resources, and the two context-aware assignment relations,
// held in an immutable, validated store. Mutation yields a new store.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "caac/csl.hpp"
#include "caac/error.hpp"
#include "caac/json_util.hpp"

namespace caac::policy {

enum class Decision : std::uint8_t { kGranted, kDenied };

inline std::string_view ToString(Decision d) {
  return d == Decision::kGranted ? "Granted" : "Denied";
}

inline std::optional<Decision> DecisionFromString(std::string_view s) {
  if (s == "Granted") return Decision::kGranted;
  if (s == "Denied") return Decision::kDenied;
  return std::nullopt;
}

struct UserRecord {
  std::string id;
  // Profile facts; they seed the context repository.
  std::map<std::string, csl::FactValue, std::less<>> attributes;

  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

struct RoleRecord {
  std::string id;
  std::set<std::string, std::less<>> juniors;  // direct juniors

  friend bool operator==(const RoleRecord&, const RoleRecord&) = default;
};

struct ResourceRecord {
  std::string id;
  std::string owner;
  std::set<std::string, std::less<>> children;    // finer-granularity parts
  std::set<std::string, std::less<>> operations;  // allowed operations

  friend bool operator==(const ResourceRecord&, const ResourceRecord&) = default;
};

struct Permission {
  std::string resource;
  std::string operation;

  friend bool operator==(const Permission&, const Permission&) = default;
};

struct CauraPolicy {
  std::string id;
  std::string user;
  std::string role;
  csl::Expression condition;

  friend bool operator==(const CauraPolicy&, const CauraPolicy&) = default;
};

// Carries exactly one decision; the type admits no other state.
struct CarpaPolicy {
  std::string id;
  std::string role;
  Permission permission;
  csl::Expression condition;
  Decision decision = Decision::kGranted;

  friend bool operator==(const CarpaPolicy&, const CarpaPolicy&) = default;
};

template <class T>
using IdMap = std::map<std::string, T, std::less<>>;

using IdSet = std::set<std::string, std::less<>>;

// ---------------------------------------------------------------------------
// Store
// ---------------------------------------------------------------------------

struct StoreContents {
  IdMap<UserRecord> users;
  IdMap<RoleRecord> roles;
  IdMap<ResourceRecord> resources;
  IdMap<CauraPolicy> caura;
  IdMap<CarpaPolicy> carpa;

  friend bool operator==(const StoreContents&, const StoreContents&) = default;
};

class PolicyStore {
 public:
  // Empty store, version 0.
  PolicyStore() : PolicyStore(StoreContents{}, 0) {}

  // Validates `contents` and builds the hierarchy closures.
  explicit PolicyStore(StoreContents contents, std::uint64_t version = 0)
      : data_(std::make_shared<const Data>(Build(std::move(contents)))),
        version_(version) {}

  std::uint64_t version() const { return version_; }
  const StoreContents& contents() const { return data_->contents; }
  const IdMap<UserRecord>& users() const { return data_->contents.users; }
  const IdMap<RoleRecord>& roles() const { return data_->contents.roles; }
  const IdMap<ResourceRecord>& resources() const { return data_->contents.resources; }
  const IdMap<CauraPolicy>& caura() const { return data_->contents.caura; }
  const IdMap<CarpaPolicy>& carpa() const { return data_->contents.carpa; }

  const UserRecord* FindUser(std::string_view id) const { return Find(users(), id); }
  const RoleRecord* FindRole(std::string_view id) const { return Find(roles(), id); }
  const ResourceRecord* FindResource(std::string_view id) const {
    return Find(resources(), id);
  }

  // The role plus every transitive junior: all roles whose permissions it
  // inherits.
  const IdSet& SeniorClosure(std::string_view role) const {
    auto it = data_->role_closure.find(role);
    if (it == data_->role_closure.end()) {
      throw UnknownRole("unknown role '" + std::string(role) + "'");
    }
    return it->second;
  }

  // The resource plus every transitive child.
  const IdSet& DescendantResources(std::string_view resource) const {
    auto it = data_->resource_closure.find(resource);
    if (it == data_->resource_closure.end()) {
      throw UnknownResource("unknown resource '" + std::string(resource) + "'");
    }
    return it->second;
  }

  std::span<const CauraPolicy* const> CauraForUser(std::string_view user) const {
    auto it = data_->caura_by_user.find(user);
    if (it == data_->caura_by_user.end()) return {};
    return it->second;
  }

  std::span<const CarpaPolicy* const> CarpaForRole(std::string_view role) const {
    auto it = data_->carpa_by_role.find(role);
    if (it == data_->carpa_by_role.end()) return {};
    return it->second;
  }

  // Re-runs every integrity check against the current contents.
  void Validate() const { Build(contents()); }

  // Content equality; the version is not compared.
  friend bool operator==(const PolicyStore& a, const PolicyStore& b) {
    return a.contents() == b.contents();
  }

 private:
  struct Data {
    StoreContents contents;
    IdMap<IdSet> role_closure;
    IdMap<IdSet> resource_closure;
    IdMap<std::vector<const CauraPolicy*>> caura_by_user;
    IdMap<std::vector<const CarpaPolicy*>> carpa_by_role;
  };

  template <class T>
  static const T* Find(const IdMap<T>& m, std::string_view id) {
    auto it = m.find(id);
    return it == m.end() ? nullptr : &it->second;
  }

  // Reachability over a DAG given as id -> direct successors. Throws
  // CycleError naming the cycle.
  template <class Record, class Edges>
  static IdMap<IdSet> Closure(const IdMap<Record>& nodes, Edges edges,
                              std::string_view kind) {
    enum class Mark { kNone, kActive, kDone };
    IdMap<Mark> mark;
    IdMap<IdSet> closure;
    std::vector<std::string> path;
    std::function<void(const std::string&)> visit = [&](const std::string& id) {
      Mark& m = mark[id];
      if (m == Mark::kDone) return;
      if (m == Mark::kActive) {
        std::vector<std::string> cycle;
        auto start = std::find(path.begin(), path.end(), id);
        cycle.assign(start, path.end());
        cycle.push_back(id);
        std::string text;
        for (const auto& c : cycle) text += (text.empty() ? "" : " -> ") + c;
        throw CycleError(std::string(kind) + " hierarchy cycle: " + text, cycle);
      }
      m = Mark::kActive;
      path.push_back(id);
      IdSet reach{id};
      for (const auto& next : edges(nodes.at(id))) {
        visit(next);
        const IdSet& sub = closure.at(next);
        reach.insert(sub.begin(), sub.end());
      }
      path.pop_back();
      mark[id] = Mark::kDone;
      closure.emplace(id, std::move(reach));
    };
    for (const auto& [id, record] : nodes) visit(id);
    return closure;
  }

  static Data Build(StoreContents contents) {
    for (const auto& [id, role] : contents.roles) {
      if (id.empty()) throw SchemaError("role with empty id");
      for (const auto& j : role.juniors) {
        if (!contents.roles.contains(j)) {
          throw ReferentialIntegrityError("role '" + id + "' names unknown junior role '" +
                                          j + "'");
        }
      }
    }
    for (const auto& [id, res] : contents.resources) {
      if (id.empty()) throw SchemaError("resource with empty id");
      if (res.owner.empty()) throw SchemaError("resource '" + id + "' has no owner");
      if (res.operations.empty()) {
        throw SchemaError("resource '" + id + "' allows no operations");
      }
      for (const auto& c : res.children) {
        if (!contents.resources.contains(c)) {
          throw ReferentialIntegrityError("resource '" + id +
                                          "' names unknown child resource '" + c + "'");
        }
      }
    }
    for (const auto& [id, user] : contents.users) {
      if (id.empty()) throw SchemaError("user with empty id");
    }
    for (const auto& [id, p] : contents.caura) {
      if (contents.carpa.contains(id)) {
        throw DuplicateIdError("policy id '" + id + "' used twice");
      }
      if (!contents.users.contains(p.user)) {
        throw ReferentialIntegrityError("CAURA policy '" + id + "' names unknown user '" +
                                        p.user + "'");
      }
      if (!contents.roles.contains(p.role)) {
        throw ReferentialIntegrityError("CAURA policy '" + id + "' names unknown role '" +
                                        p.role + "'");
      }
      if (p.condition.empty()) throw SchemaError("CAURA policy '" + id + "' has no condition");
    }
    for (const auto& [id, p] : contents.carpa) {
      if (!contents.roles.contains(p.role)) {
        throw ReferentialIntegrityError("CARPA policy '" + id + "' names unknown role '" +
                                        p.role + "'");
      }
      auto res = contents.resources.find(p.permission.resource);
      if (res == contents.resources.end()) {
        throw ReferentialIntegrityError("CARPA policy '" + id +
                                        "' names unknown resource '" +
                                        p.permission.resource + "'");
      }
      if (!res->second.operations.contains(p.permission.operation)) {
        throw ReferentialIntegrityError("CARPA policy '" + id + "': operation '" +
                                        p.permission.operation +
                                        "' is not assigned to resource '" + res->first + "'");
      }
      if (p.condition.empty()) throw SchemaError("CARPA policy '" + id + "' has no condition");
    }

    Data data;
    data.contents = std::move(contents);
    data.role_closure = Closure(data.contents.roles,
                                [](const RoleRecord& r) -> const IdSet& { return r.juniors; },
                                "role");
    data.resource_closure = Closure(
        data.contents.resources,
        [](const ResourceRecord& r) -> const IdSet& { return r.children; }, "resource");
    for (const auto& [id, p] : data.contents.caura) data.caura_by_user[p.user].push_back(&p);
    for (const auto& [id, p] : data.contents.carpa) data.carpa_by_role[p.role].push_back(&p);
    return data;
  }

  std::shared_ptr<const Data> data_;
  std::uint64_t version_;
};

// ---------------------------------------------------------------------------
// Mutation
// ---------------------------------------------------------------------------

namespace change {
struct AddUser { UserRecord user; };
struct RemoveUser { std::string id; };
struct AddRole { RoleRecord role; };
struct RemoveRole { std::string id; };
struct AddResource { ResourceRecord resource; };
struct RemoveResource { std::string id; };
struct AddPolicy { std::variant<CauraPolicy, CarpaPolicy> policy; };
struct RemovePolicy { std::string id; };
}  // namespace change

// Add* on an existing user/role/resource replaces the record (policies
// referencing it are kept); AddPolicy with a used id is rejected.
using Change = std::variant<change::AddUser, change::RemoveUser, change::AddRole,
                            change::RemoveRole, change::AddResource,
                            change::RemoveResource, change::AddPolicy,
                            change::RemovePolicy>;

struct MutationOptions {
  // Refuse to remove entities that policies or hierarchies still reference
  // instead of cascading.
  bool strict = false;
};

namespace detail {

template <class T, class Pred>
std::size_t EraseIf(IdMap<T>& m, Pred pred) {
  return std::erase_if(m, [&](const auto& kv) { return pred(kv.second); });
}

inline void RefuseIfReferenced(bool referenced, const std::string& what) {
  if (referenced) throw ReferencedEntityError(what + " is still referenced");
}

}  // namespace detail

inline PolicyStore Mutate(const PolicyStore& store, const Change& c,
                          const MutationOptions& options = {}) {
  StoreContents next = store.contents();
  auto require = [](bool exists, const std::string& what) {
    if (!exists) throw UnknownTarget(what + " does not exist");
  };
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, change::AddUser>) {
          next.users[op.user.id] = op.user;
        } else if constexpr (std::is_same_v<T, change::AddRole>) {
          next.roles[op.role.id] = op.role;
        } else if constexpr (std::is_same_v<T, change::AddResource>) {
          next.resources[op.resource.id] = op.resource;
        } else if constexpr (std::is_same_v<T, change::AddPolicy>) {
          const std::string& id =
              std::visit([](const auto& p) -> const std::string& { return p.id; }, op.policy);
          if (next.caura.contains(id) || next.carpa.contains(id)) {
            throw DuplicateIdError("policy id '" + id + "' already exists");
          }
          if (const auto* p = std::get_if<CauraPolicy>(&op.policy)) {
            next.caura[id] = *p;
          } else {
            next.carpa[id] = std::get<CarpaPolicy>(op.policy);
          }
        } else if constexpr (std::is_same_v<T, change::RemoveUser>) {
          require(next.users.contains(op.id), "user '" + op.id + "'");
          if (options.strict) {
            detail::RefuseIfReferenced(
                std::any_of(next.caura.begin(), next.caura.end(),
                            [&](const auto& kv) { return kv.second.user == op.id; }),
                "user '" + op.id + "'");
          }
          next.users.erase(op.id);
          detail::EraseIf(next.caura, [&](const CauraPolicy& p) { return p.user == op.id; });
        } else if constexpr (std::is_same_v<T, change::RemoveRole>) {
          require(next.roles.contains(op.id), "role '" + op.id + "'");
          if (options.strict) {
            bool referenced =
                std::any_of(next.caura.begin(), next.caura.end(),
                            [&](const auto& kv) { return kv.second.role == op.id; }) ||
                std::any_of(next.carpa.begin(), next.carpa.end(),
                            [&](const auto& kv) { return kv.second.role == op.id; }) ||
                std::any_of(next.roles.begin(), next.roles.end(),
                            [&](const auto& kv) { return kv.second.juniors.contains(op.id); });
            detail::RefuseIfReferenced(referenced, "role '" + op.id + "'");
          }
          next.roles.erase(op.id);
          for (auto& [id, role] : next.roles) role.juniors.erase(op.id);
          detail::EraseIf(next.caura, [&](const CauraPolicy& p) { return p.role == op.id; });
          detail::EraseIf(next.carpa, [&](const CarpaPolicy& p) { return p.role == op.id; });
        } else if constexpr (std::is_same_v<T, change::RemoveResource>) {
          require(next.resources.contains(op.id), "resource '" + op.id + "'");
          if (options.strict) {
            bool referenced =
                std::any_of(next.carpa.begin(), next.carpa.end(),
                            [&](const auto& kv) {
                              return kv.second.permission.resource == op.id;
                            }) ||
                std::any_of(next.resources.begin(), next.resources.end(),
                            [&](const auto& kv) { return kv.second.children.contains(op.id); });
            detail::RefuseIfReferenced(referenced, "resource '" + op.id + "'");
          }
          next.resources.erase(op.id);
          for (auto& [id, res] : next.resources) res.children.erase(op.id);
          detail::EraseIf(next.carpa, [&](const CarpaPolicy& p) {
            return p.permission.resource == op.id;
          });
        } else if constexpr (std::is_same_v<T, change::RemovePolicy>) {
          require(next.caura.erase(op.id) + next.carpa.erase(op.id) > 0,
                  "policy '" + op.id + "'");
        }
      },
      c);
  return PolicyStore(std::move(next), store.version() + 1);
}

inline PolicyStore Mutate(const PolicyStore& store, std::span<const Change> changes,
                          const MutationOptions& options = {}) {
  PolicyStore current = store;
  for (const auto& c : changes) current = Mutate(current, c, options);
  return current;
}

// ---------------------------------------------------------------------------
// Policy file format
// ---------------------------------------------------------------------------

namespace detail {

using json_util::CheckObject;
using json_util::Require;
using json_util::RequireString;
using json_util::StringArray;

inline csl::Expression ParseCondition(const nlohmann::json& j, const std::string& where) {
  const std::string text = RequireString(j, "condition", where);
  try {
    return csl::Parse(text);
  } catch (const SyntaxError& e) {
    throw ParseError(where + ": condition " + e.what());
  }
}

inline IdSet ToIdSet(const std::vector<std::string>& v) { return IdSet(v.begin(), v.end()); }

}  // namespace detail

inline UserRecord UserFromJson(const nlohmann::json& j) {
  using namespace detail;
  CheckObject(j, "user", {"id", "attributes"});
  UserRecord u;
  u.id = RequireString(j, "id", "user");
  if (auto it = j.find("attributes"); it != j.end()) {
    if (!it->is_object()) throw SchemaError("user '" + u.id + "': attributes must be an object");
    for (const auto& [k, v] : it->items()) {
      u.attributes[k] = json_util::FactValueFromJson(v, "user '" + u.id + "' attribute");
    }
  }
  return u;
}

inline RoleRecord RoleFromJson(const nlohmann::json& j) {
  using namespace detail;
  CheckObject(j, "role", {"id", "juniors"});
  RoleRecord r;
  r.id = RequireString(j, "id", "role");
  r.juniors = ToIdSet(StringArray(j, "juniors", "role '" + r.id + "'"));
  return r;
}

inline ResourceRecord ResourceFromJson(const nlohmann::json& j) {
  using namespace detail;
  CheckObject(j, "resource", {"id", "owner", "operations", "children"});
  ResourceRecord r;
  r.id = RequireString(j, "id", "resource");
  const std::string where = "resource '" + r.id + "'";
  r.owner = RequireString(j, "owner", where);
  r.operations = ToIdSet(StringArray(j, "operations", where, /*required=*/true));
  r.children = ToIdSet(StringArray(j, "children", where));
  return r;
}

inline CauraPolicy CauraFromJson(const nlohmann::json& j) {
  using namespace detail;
  CheckObject(j, "CAURA policy", {"id", "user", "role", "condition"});
  CauraPolicy p;
  p.id = RequireString(j, "id", "CAURA policy");
  const std::string where = "CAURA policy '" + p.id + "'";
  p.user = RequireString(j, "user", where);
  p.role = RequireString(j, "role", where);
  p.condition = ParseCondition(j, where);
  return p;
}

inline CarpaPolicy CarpaFromJson(const nlohmann::json& j) {
  using namespace detail;
  CheckObject(j, "CARPA policy",
              {"id", "role", "resource", "operation", "decision", "condition"});
  CarpaPolicy p;
  p.id = RequireString(j, "id", "CARPA policy");
  const std::string where = "CARPA policy '" + p.id + "'";
  p.role = RequireString(j, "role", where);
  p.permission.resource = RequireString(j, "resource", where);
  p.permission.operation = RequireString(j, "operation", where);
  const auto& decision = Require(j, "decision", where);
  if (!decision.is_string()) {
    throw SchemaError(where + ": exactly one decision value (\"Granted\" or \"Denied\") "
                      "is required");
  }
  auto d = DecisionFromString(decision.get<std::string>());
  if (!d) {
    throw SchemaError(where + ": decision must be \"Granted\" or \"Denied\", got \"" +
                      decision.get<std::string>() + "\"");
  }
  p.decision = *d;
  p.condition = ParseCondition(j, where);
  return p;
}

namespace detail {

template <class T, class FromJson>
void LoadSection(const nlohmann::json& doc, std::string_view key, IdMap<T>& out,
                 FromJson from_json, std::set<std::string>* policy_ids = nullptr) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  if (!it->is_array()) {
    throw SchemaError("policy file: '" + std::string(key) + "' must be an array");
  }
  for (const auto& item : *it) {
    T record = from_json(item);
    const bool fresh = policy_ids != nullptr ? policy_ids->insert(record.id).second
                                             : !out.contains(record.id);
    if (!fresh) {
      throw DuplicateIdError("policy file: duplicate id '" + record.id + "' in '" +
                             std::string(key) + "'");
    }
    std::string id = record.id;
    out.emplace(std::move(id), std::move(record));
  }
}

}  // namespace detail

inline PolicyStore LoadStore(std::string_view text) {
  const auto doc = json_util::ParseStrict(text, "policy file");
  json_util::CheckObject(doc, "policy file", {"users", "roles", "resources", "caura", "carpa"});
  StoreContents c;
  std::set<std::string> policy_ids;
  detail::LoadSection(doc, "users", c.users, UserFromJson);
  detail::LoadSection(doc, "roles", c.roles, RoleFromJson);
  detail::LoadSection(doc, "resources", c.resources, ResourceFromJson);
  detail::LoadSection(doc, "caura", c.caura, CauraFromJson, &policy_ids);
  detail::LoadSection(doc, "carpa", c.carpa, CarpaFromJson, &policy_ids);
  return PolicyStore(std::move(c));
}

inline nlohmann::ordered_json UserToJson(const UserRecord& u) {
  nlohmann::ordered_json j{{"id", u.id}};
  if (!u.attributes.empty()) {
    nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
    for (const auto& [k, v] : u.attributes) attrs[k] = json_util::FactValueToJson(v);
    j["attributes"] = attrs;
  }
  return j;
}

inline nlohmann::ordered_json RoleToJson(const RoleRecord& r) {
  return {{"id", r.id}, {"juniors", std::vector<std::string>(r.juniors.begin(), r.juniors.end())}};
}

inline nlohmann::ordered_json ResourceToJson(const ResourceRecord& r) {
  return {{"id", r.id},
          {"owner", r.owner},
          {"operations", std::vector<std::string>(r.operations.begin(), r.operations.end())},
          {"children", std::vector<std::string>(r.children.begin(), r.children.end())}};
}

inline nlohmann::ordered_json CauraToJson(const CauraPolicy& p) {
  return {{"id", p.id},
          {"user", p.user},
          {"role", p.role},
          {"condition", csl::Serialize(p.condition)}};
}

inline nlohmann::ordered_json CarpaToJson(const CarpaPolicy& p) {
  return {{"id", p.id},
          {"role", p.role},
          {"resource", p.permission.resource},
          {"operation", p.permission.operation},
          {"decision", std::string(ToString(p.decision))},
          {"condition", csl::Serialize(p.condition)}};
}

// Canonical serialization: sections in fixed order, records sorted by id.
inline std::string SaveStore(const PolicyStore& store) {
  nlohmann::ordered_json doc;
  auto section = [&](const char* key, const auto& records, auto to_json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [id, r] : records) arr.push_back(to_json(r));
    doc[key] = arr;
  };
  section("users", store.users(), UserToJson);
  section("roles", store.roles(), RoleToJson);
  section("resources", store.resources(), ResourceToJson);
  section("caura", store.caura(), CauraToJson);
  section("carpa", store.carpa(), CarpaToJson);
  return doc.dump(2) + "\n";
}

// Change object: {"op": "AddRole", "role": {...}} etc.
inline Change ChangeFromJson(const nlohmann::json& j) {
  using namespace detail;
  if (!j.is_object()) throw SchemaError("change: expected an object");
  const std::string op = RequireString(j, "op", "change");
  auto body = [&](const char* key) -> const nlohmann::json& {
    CheckObject(j, "change " + op, {"op", key});
    return Require(j, key, "change " + op);
  };
  auto id = [&]() {
    CheckObject(j, "change " + op, {"op", "id"});
    return RequireString(j, "id", "change " + op);
  };
  if (op == "AddUser") return change::AddUser{UserFromJson(body("user"))};
  if (op == "RemoveUser") return change::RemoveUser{id()};
  if (op == "AddRole") return change::AddRole{RoleFromJson(body("role"))};
  if (op == "RemoveRole") return change::RemoveRole{id()};
  if (op == "AddResource") return change::AddResource{ResourceFromJson(body("resource"))};
  if (op == "RemoveResource") return change::RemoveResource{id()};
  if (op == "RemovePolicy") return change::RemovePolicy{id()};
  if (op == "AddPolicy") {
    CheckObject(j, "change AddPolicy", {"op", "caura", "carpa"});
    const bool has_caura = j.contains("caura");
    if (has_caura == j.contains("carpa")) {
      throw SchemaError("change AddPolicy: exactly one of 'caura' or 'carpa' is required");
    }
    if (has_caura) return change::AddPolicy{CauraFromJson(j.at("caura"))};
    return change::AddPolicy{CarpaFromJson(j.at("carpa"))};
  }
  throw SchemaError("change: unknown op '" + op + "'");
}

// A single change object or an array of them.
inline std::vector<Change> ChangesFromJson(const nlohmann::json& j) {
  std::vector<Change> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(ChangeFromJson(item));
  } else {
    out.push_back(ChangeFromJson(j));
  }
  return out;
}

}  // namespace caac::policy
