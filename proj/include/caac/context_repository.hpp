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

// Stored context facts, one-layer derivation rules for complex context, and
// immutable evaluation snapshots.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
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

namespace caac::context {

using csl::EntityBindings;
using csl::FactValue;
using csl::Literal;

enum class ValueType : std::uint8_t { kString, kNumber, kList };

inline ValueType TypeOf(const FactValue& v) {
  if (const auto* lit = std::get_if<Literal>(&v)) {
    return lit->is_string() ? ValueType::kString : ValueType::kNumber;
  }
  return ValueType::kList;
}

inline std::string_view ToString(ValueType t) {
  switch (t) {
    case ValueType::kString: return "string";
    case ValueType::kNumber: return "number";
    case ValueType::kList: return "list";
  }
  return "?";
}

struct ContextFact {
  std::string entity;
  std::string attribute;
  FactValue value;
  std::uint64_t timestamp = 0;

  friend bool operator==(const ContextFact&, const ContextFact&) = default;
};

// entity -> attribute -> fact
using AttributeMap = std::map<std::string, ContextFact, std::less<>>;
using FactMap = std::map<std::string, AttributeMap, std::less<>>;

inline const ContextFact* FindFact(const FactMap& facts, std::string_view entity,
                                   std::string_view attribute) {
  auto e = facts.find(entity);
  if (e == facts.end()) return nullptr;
  auto a = e->second.find(attribute);
  return a == e->second.end() ? nullptr : &a->second;
}

// ---------------------------------------------------------------------------
// Derivation rules
// ---------------------------------------------------------------------------

struct AttributeRef {
  std::string param;
  std::string attribute;

  friend bool operator==(const AttributeRef&, const AttributeRef&) = default;
};

// `param.attribute OP (literal | otherParam.attribute)`. The attribute `id`
// resolves to the bound entity identifier when no such fact is stored.
struct BodyAtom {
  AttributeRef left;
  csl::RelOp op;
  std::variant<Literal, AttributeRef> right;

  friend bool operator==(const BodyAtom&, const BodyAtom&) = default;
};

struct DerivationRule {
  std::string id;
  std::string function;
  std::vector<std::string> params;
  Literal result;
  std::vector<BodyAtom> when;

  friend bool operator==(const DerivationRule&, const DerivationRule&) = default;
};

class RuleSet {
 public:
  RuleSet() = default;

  // Validates ids, parameter references, per-function arity, operator
  // registration, and stratification (bodies never read derived functions).
  explicit RuleSet(std::vector<DerivationRule> rules,
                   const csl::OperatorRegistry& registry =
                       csl::OperatorRegistry::Default())
      : rules_(std::move(rules)) {
    std::set<std::string> ids;
    for (const auto& rule : rules_) {
      const std::string where = "rule '" + rule.id + "'";
      if (rule.id.empty()) throw RuleError("derivation rule without id");
      if (!ids.insert(rule.id).second) throw RuleError("duplicate " + where);
      if (rule.function.empty()) throw RuleError(where + ": missing function");
      if (rule.params.empty()) throw RuleError(where + ": needs at least one parameter");
      std::set<std::string> params(rule.params.begin(), rule.params.end());
      if (params.size() != rule.params.size()) {
        throw RuleError(where + ": duplicate parameter name");
      }
      auto [it, inserted] = arity_.emplace(rule.function, rule.params.size());
      if (!inserted && it->second != rule.params.size()) {
        throw RuleError(where + ": function '" + rule.function +
                        "' declared with differing arity");
      }
      for (const auto& atom : rule.when) {
        auto check_param = [&](const AttributeRef& ref) {
          if (!params.contains(ref.param)) {
            throw RuleError(where + ": undeclared parameter '" + ref.param + "'");
          }
        };
        check_param(atom.left);
        if (const auto* ref = std::get_if<AttributeRef>(&atom.right)) check_param(*ref);
        if (!atom.op.is_builtin() && !registry.Contains(atom.op.name)) {
          throw RuleError(where + ": operator '" + atom.op.name + "' is not registered");
        }
      }
    }
    for (const auto& rule : rules_) {
      for (const auto& atom : rule.when) {
        auto check_stratified = [&](const AttributeRef& ref) {
          if (arity_.contains(ref.attribute)) {
            throw RuleError("rule '" + rule.id + "': body reads derived function '" +
                            ref.attribute + "'; rules may only read stored facts");
          }
        };
        check_stratified(atom.left);
        if (const auto* ref = std::get_if<AttributeRef>(&atom.right)) {
          check_stratified(*ref);
        }
      }
    }
  }

  const std::vector<DerivationRule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }
  const std::map<std::string, std::size_t, std::less<>>& functions() const {
    return arity_;
  }

  // First rule (file order) for `function` whose body holds over `facts`.
  std::optional<Literal> Derive(std::string_view function,
                                std::span<const std::string> ids,
                                const FactMap& facts,
                                const csl::OperatorRegistry& registry) const {
    auto fn = arity_.find(function);
    if (fn == arity_.end()) return std::nullopt;
    if (fn->second != ids.size()) {
      throw ArityMismatch("function '" + std::string(function) + "' takes " +
                          std::to_string(fn->second) + " argument(s), got " +
                          std::to_string(ids.size()));
    }
    for (const auto& rule : rules_) {
      if (rule.function != function) continue;
      if (BodyHolds(rule, ids, facts, registry)) return rule.result;
    }
    return std::nullopt;
  }

  friend bool operator==(const RuleSet& a, const RuleSet& b) { return a.rules_ == b.rules_; }

 private:
  static std::optional<FactValue> Resolve(const DerivationRule& rule,
                                          const AttributeRef& ref,
                                          std::span<const std::string> ids,
                                          const FactMap& facts) {
    std::size_t index = 0;
    while (rule.params[index] != ref.param) ++index;
    const std::string& entity = ids[index];
    if (const ContextFact* f = FindFact(facts, entity, ref.attribute)) return f->value;
    if (ref.attribute == "id") return FactValue(Literal::String(entity));
    return std::nullopt;
  }

  static bool BodyHolds(const DerivationRule& rule, std::span<const std::string> ids,
                        const FactMap& facts, const csl::OperatorRegistry& registry) {
    for (const auto& atom : rule.when) {
      auto left = Resolve(rule, atom.left, ids, facts);
      if (!left) return false;
      std::optional<FactValue> right;
      if (const auto* lit = std::get_if<Literal>(&atom.right)) {
        right = FactValue(*lit);
      } else {
        right = Resolve(rule, std::get<AttributeRef>(atom.right), ids, facts);
      }
      if (!right) return false;
      if (!csl::Compare(*left, atom.op, *right, registry)) return false;
    }
    return true;
  }

  std::vector<DerivationRule> rules_;
  std::map<std::string, std::size_t, std::less<>> arity_;
};

// ---------------------------------------------------------------------------
// Snapshot
// ---------------------------------------------------------------------------

// Immutable view of facts at one instant. Derived values are memoized on
// first use; the memo is internally synchronized so snapshots can be shared
// across threads.
class ContextSnapshot {
 public:
  using DerivedKey = std::pair<std::string, std::vector<std::string>>;
  using DerivedMap = std::map<DerivedKey, std::optional<Literal>>;

  ContextSnapshot()
      : ContextSnapshot(std::make_shared<const FactMap>(),
                        std::make_shared<const RuleSet>(),
                        &csl::OperatorRegistry::Default(), 0) {}

  ContextSnapshot(std::shared_ptr<const FactMap> facts,
                  std::shared_ptr<const RuleSet> rules,
                  const csl::OperatorRegistry* registry, std::uint64_t version)
      : facts_(std::move(facts)),
        rules_(std::move(rules)),
        registry_(registry),
        version_(version),
        cache_(std::make_shared<Cache>()) {}

  std::uint64_t version() const { return version_; }
  const FactMap& facts() const { return *facts_; }
  const RuleSet& rules() const { return *rules_; }
  const csl::OperatorRegistry& registry() const { return *registry_; }

  const FactValue* Lookup(std::string_view entity, std::string_view attribute) const {
    const ContextFact* f = FindFact(*facts_, entity, attribute);
    return f == nullptr ? nullptr : &f->value;
  }

  std::optional<Literal> Derive(std::string_view function,
                                std::span<const std::string> ids) const {
    DerivedKey key{std::string(function), std::vector<std::string>(ids.begin(), ids.end())};
    {
      std::lock_guard lock(cache_->mutex);
      auto it = cache_->values.find(key);
      if (it != cache_->values.end()) return it->second;
    }
    std::optional<Literal> value = rules_->Derive(function, ids, *facts_, *registry_);
    std::lock_guard lock(cache_->mutex);
    cache_->values.emplace(std::move(key), value);
    return value;
  }

  // Copy of the memoized derived values computed so far.
  DerivedMap derived_cache() const {
    std::lock_guard lock(cache_->mutex);
    return cache_->values;
  }

  std::vector<std::string> entities() const {
    std::vector<std::string> out;
    for (const auto& [entity, attrs] : *facts_) out.push_back(entity);
    return out;
  }

 private:
  struct Cache {
    std::mutex mutex;
    DerivedMap values;
  };

  std::shared_ptr<const FactMap> facts_;
  std::shared_ptr<const RuleSet> rules_;
  const csl::OperatorRegistry* registry_;
  std::uint64_t version_;
  std::shared_ptr<Cache> cache_;
};

static_assert(csl::FactResolver<ContextSnapshot>);

// ---------------------------------------------------------------------------
// Repository
// ---------------------------------------------------------------------------

// Single-writer fact store. Snapshots share the fact map; the first put
// after a snapshot copies it.
class ContextRepository {
 public:
  explicit ContextRepository(RuleSet rules = {},
                             const csl::OperatorRegistry& registry =
                                 csl::OperatorRegistry::Default())
      : facts_(std::make_shared<FactMap>()),
        rules_(std::make_shared<const RuleSet>(std::move(rules))),
        registry_(&registry) {}

  // Loads the JSON context file: {"facts": [...], "rules": [...]}.
  static ContextRepository Load(std::string_view text,
                                const csl::OperatorRegistry& registry =
                                    csl::OperatorRegistry::Default());

  std::uint64_t Put(const std::string& entity, const std::string& attribute,
                    FactValue value) {
    if (entity.empty() || attribute.empty()) {
      throw SchemaError("fact entity and attribute must be non-empty");
    }
    const ValueType type = TypeOf(value);
    auto declared = types_.find(attribute);
    if (declared != types_.end() && declared->second != type) {
      throw TypeMismatch("attribute '" + attribute + "' is declared " +
                         std::string(ToString(declared->second)) + ", got " +
                         std::string(ToString(type)));
    }
    if (facts_.use_count() > 1) facts_ = std::make_shared<FactMap>(*facts_);
    types_.emplace(attribute, type);
    ++version_;
    (*facts_)[entity][attribute] = ContextFact{entity, attribute, std::move(value), version_};
    return version_;
  }

  // Fixes the value type of an attribute before any fact is stored.
  void Declare(const std::string& attribute, ValueType type) {
    auto [it, inserted] = types_.emplace(attribute, type);
    if (!inserted && it->second != type) {
      throw TypeMismatch("attribute '" + attribute + "' already declared " +
                         std::string(ToString(it->second)));
    }
  }

  ContextSnapshot Snapshot() const {
    return ContextSnapshot(facts_, rules_, registry_, version_);
  }

  std::uint64_t version() const { return version_; }
  const FactMap& facts() const { return *facts_; }
  const RuleSet& rules() const { return *rules_; }
  const csl::OperatorRegistry& registry() const { return *registry_; }

  void SetRules(RuleSet rules) { rules_ = std::make_shared<const RuleSet>(std::move(rules)); }

 private:
  std::shared_ptr<FactMap> facts_;
  std::shared_ptr<const RuleSet> rules_;
  const csl::OperatorRegistry* registry_;
  std::map<std::string, ValueType, std::less<>> types_;
  std::uint64_t version_ = 0;
};

// ---------------------------------------------------------------------------
// Context file format
// ---------------------------------------------------------------------------

namespace detail {

inline AttributeRef ParseAttributeRef(const std::string& text, const std::string& where) {
  const auto dot = text.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == text.size() ||
      text.find('.', dot + 1) != std::string::npos) {
    throw SchemaError(where + ": expected 'param.attribute', got '" + text + "'");
  }
  return {text.substr(0, dot), text.substr(dot + 1)};
}

}  // namespace detail

inline DerivationRule RuleFromJson(const nlohmann::json& j) {
  using namespace json_util;
  CheckObject(j, "rule", {"id", "function", "params", "result", "when"});
  DerivationRule rule;
  rule.id = RequireString(j, "id", "rule");
  const std::string where = "rule '" + rule.id + "'";
  rule.function = RequireString(j, "function", where);
  rule.params = StringArray(j, "params", where, /*required=*/true);
  rule.result = LiteralFromJson(Require(j, "result", where), where + " result");
  std::set<std::string> params(rule.params.begin(), rule.params.end());
  if (auto it = j.find("when"); it != j.end()) {
    if (!it->is_array()) throw SchemaError(where + ": 'when' must be an array");
    for (const auto& a : *it) {
      CheckObject(a, where + " body atom", {"left", "op", "right"});
      BodyAtom atom;
      atom.left = detail::ParseAttributeRef(RequireString(a, "left", where), where);
      atom.op = csl::RelOp::FromSymbol(RequireString(a, "op", where));
      const auto& right = Require(a, "right", where);
      atom.right = LiteralFromJson(right, where);
      // A string of the form `param.attribute` naming a declared parameter
      // is an attribute reference rather than a literal.
      if (right.is_string()) {
        const std::string s = right.get<std::string>();
        const auto dot = s.find('.');
        if (dot != std::string::npos && params.contains(s.substr(0, dot))) {
          atom.right = detail::ParseAttributeRef(s, where);
        }
      }
      rule.when.push_back(std::move(atom));
    }
  }
  return rule;
}

inline nlohmann::json RuleToJson(const DerivationRule& rule) {
  using nlohmann::json;
  json when = json::array();
  for (const auto& atom : rule.when) {
    json right;
    if (const auto* lit = std::get_if<Literal>(&atom.right)) {
      right = json_util::LiteralToJson(*lit);
    } else {
      const auto& ref = std::get<AttributeRef>(atom.right);
      right = ref.param + "." + ref.attribute;
    }
    when.push_back({{"left", atom.left.param + "." + atom.left.attribute},
                    {"op", atom.op.ToSymbol()},
                    {"right", right}});
  }
  return {{"id", rule.id},
          {"function", rule.function},
          {"params", rule.params},
          {"result", json_util::LiteralToJson(rule.result)},
          {"when", when}};
}

inline ContextRepository ContextRepository::Load(std::string_view text,
                                                 const csl::OperatorRegistry& registry) {
  using namespace json_util;
  const auto doc = ParseStrict(text, "context file");
  CheckObject(doc, "context file", {"facts", "rules"});
  std::vector<DerivationRule> rules;
  if (auto it = doc.find("rules"); it != doc.end()) {
    if (!it->is_array()) throw SchemaError("context file: 'rules' must be an array");
    for (const auto& r : *it) rules.push_back(RuleFromJson(r));
  }
  ContextRepository repo(RuleSet(std::move(rules), registry), registry);
  if (auto it = doc.find("facts"); it != doc.end()) {
    if (!it->is_array()) throw SchemaError("context file: 'facts' must be an array");
    for (const auto& f : *it) {
      CheckObject(f, "fact", {"entity", "attribute", "value"});
      repo.Put(RequireString(f, "entity", "fact"), RequireString(f, "attribute", "fact"),
               FactValueFromJson(Require(f, "value", "fact"), "fact value"));
    }
  }
  return repo;
}

// Serializes current facts (entity/attribute order) and rules (file order).
inline std::string SaveContext(const ContextRepository& repo) {
  using nlohmann::json;
  json facts = json::array();
  for (const auto& [entity, attrs] : repo.facts()) {
    for (const auto& [attribute, fact] : attrs) {
      facts.push_back({{"entity", entity},
                       {"attribute", attribute},
                       {"value", json_util::FactValueToJson(fact.value)}});
    }
  }
  json rules = json::array();
  for (const auto& rule : repo.rules().rules()) rules.push_back(RuleToJson(rule));
  return json{{"facts", facts}, {"rules", rules}}.dump(2) + "\n";
}

}  // namespace caac::context
