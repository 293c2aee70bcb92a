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


// Independent reference implementations used by the unit and acceptance
// suites. Nothing here calls into the engine's evaluation code.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "caac/csl.hpp"
#include "caac/policy_model.hpp"

namespace caac::testing {

using csl::Truth;

// ---------------------------------------------------------------------------
// Three-valued truth tables, written out cell by cell.
// ---------------------------------------------------------------------------

inline constexpr Truth kF = Truth::kFalse;
inline constexpr Truth kT = Truth::kTrue;
inline constexpr Truth kU = Truth::kUnknown;
inline constexpr Truth kAllTruths[] = {kF, kT, kU};

inline int Index(Truth t) { return t == kF ? 0 : t == kT ? 1 : 2; }

inline Truth TableAnd(Truth a, Truth b) {
  static constexpr Truth table[3][3] = {
      {kF, kF, kF},  // F
      {kF, kT, kU},  // T
      {kF, kU, kU},  // U
  };
  return table[Index(a)][Index(b)];
}

inline Truth TableOr(Truth a, Truth b) {
  static constexpr Truth table[3][3] = {
      {kF, kT, kU},
      {kT, kT, kT},
      {kU, kT, kU},
  };
  return table[Index(a)][Index(b)];
}

inline Truth TableNot(Truth a) {
  static constexpr Truth table[3] = {kT, kF, kU};
  return table[Index(a)];
}

// ---------------------------------------------------------------------------
// Map-backed fact resolver.
// ---------------------------------------------------------------------------

struct MapResolver {
  std::map<std::pair<std::string, std::string>, csl::FactValue> facts;
  std::map<std::pair<std::string, std::vector<std::string>>, csl::Literal> derived;

  void Set(std::string entity, std::string attribute, csl::FactValue v) {
    facts[{std::move(entity), std::move(attribute)}] = std::move(v);
  }

  const csl::FactValue* Lookup(std::string_view entity, std::string_view attribute) const {
    auto it = facts.find({std::string(entity), std::string(attribute)});
    return it == facts.end() ? nullptr : &it->second;
  }

  std::optional<csl::Literal> Derive(std::string_view fn,
                                     std::span<const std::string> ids) const {
    auto it = derived.find({std::string(fn), std::vector<std::string>(ids.begin(), ids.end())});
    if (it == derived.end()) return std::nullopt;
    return it->second;
  }
};

inline csl::Literal Str(std::string s) { return csl::Literal::String(std::move(s)); }
inline csl::Literal Num(std::string_view s) { return csl::Literal::Number(*Decimal::Parse(s)); }

// ---------------------------------------------------------------------------
// Random AST generator.
// ---------------------------------------------------------------------------

class AstGenerator {
 public:
  explicit AstGenerator(std::uint64_t seed) : rng_(seed) {}

  csl::Expression Expression(int max_depth) {
    if (max_depth <= 1 || Below(4) == 0) return Atom();
    switch (Below(3)) {
      case 0: return csl::Expression::MakeNot(Expression(max_depth - 1));
      case 1:
        return csl::Expression::MakeAnd(Expression(max_depth - 1), Expression(max_depth - 1));
      default:
        return csl::Expression::MakeOr(Expression(max_depth - 1), Expression(max_depth - 1));
    }
  }

  csl::Expression Atom() {
    csl::ContextRef ref;
    if (Below(3) == 0) {
      std::vector<std::string> args;
      const int n = 1 + static_cast<int>(Below(3));
      for (int i = 0; i < n; ++i) args.push_back(Role());
      ref = csl::ContextRef::Complex(Ident(), std::move(args));
    } else {
      ref = csl::ContextRef::Simple(Role(), Ident());
    }
    static const csl::RelOp::Kind kinds[] = {
        csl::RelOp::Kind::kLt, csl::RelOp::Kind::kLe, csl::RelOp::Kind::kGt,
        csl::RelOp::Kind::kGe, csl::RelOp::Kind::kEq, csl::RelOp::Kind::kNe};
    csl::RelOp op = Below(7) == 0 ? csl::RelOp::UserDefined(Below(2) ? "contains" : "entering")
                                  : csl::RelOp::Builtin(kinds[Below(6)]);
    csl::Literal value = Below(2) ? Str(String()) : Num(Number());
    return csl::Expression::MakeAtom(std::move(ref), std::move(op), std::move(value));
  }

 private:
  std::uint64_t Below(std::uint64_t n) { return rng_() % n; }

  std::string Role() {
    static const char* roles[] = {"User", "Owner", "Resource", "Environment"};
    return Below(5) == 0 ? Ident() : roles[Below(4)];
  }

  std::string Ident() {
    static const std::string first = "abcxyzABCXYZ_";
    static const std::string rest = "abcxyzABCXYZ_0189";
    std::string s(1, first[Below(first.size())]);
    const auto n = Below(8);
    for (std::uint64_t i = 0; i < n; ++i) s += rest[Below(rest.size())];
    return s;
  }

  std::string String() {
    static const std::string chars = "aZ09 _-.,()&|!=<>#\"\\\n\t\r";
    std::string s;
    const auto n = Below(10);
    for (std::uint64_t i = 0; i < n; ++i) s += chars[Below(chars.size())];
    if (Below(5) == 0) s += "\xc3\xa9";  // UTF-8 e-acute
    return s;
  }

  std::string Number() {
    std::string s = Below(3) == 0 ? "-" : "";
    const auto digits = 1 + Below(6);
    for (std::uint64_t i = 0; i < digits; ++i) s += static_cast<char>('0' + Below(10));
    if (Below(2)) {
      s += '.';
      const auto frac = 1 + Below(4);
      for (std::uint64_t i = 0; i < frac; ++i) s += static_cast<char>('0' + Below(10));
    }
    return s;
  }

  std::mt19937_64 rng_;
};

// Structural comparison spelled out independently of Expression::operator==.
inline bool SameTree(const csl::Expression& a, const csl::Expression& b) {
  using K = csl::Expression::Kind;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case K::kAtom: {
      const auto& x = a.atom();
      const auto& y = b.atom();
      return x.ref.kind == y.ref.kind && x.ref.entity_role == y.ref.entity_role &&
             x.ref.attribute == y.ref.attribute && x.ref.function == y.ref.function &&
             x.ref.arguments == y.ref.arguments && x.op.kind == y.op.kind &&
             x.op.name == y.op.name && x.value.is_string() == y.value.is_string() &&
             x.value.text() == y.value.text();
    }
    case K::kNot: return SameTree(a.operand(), b.operand());
    case K::kAnd:
    case K::kOr: return SameTree(a.lhs(), b.lhs()) && SameTree(a.rhs(), b.rhs());
  }
  return false;
}

// ---------------------------------------------------------------------------
// Boolean formula shapes over k atom slots, for truth-table enumeration.
// ---------------------------------------------------------------------------

struct Shape {
  enum Kind { kLeaf, kAnd, kOr, kNot } kind = kLeaf;
  int slot = 0;
  std::vector<Shape> children;
};

inline Shape RandomShape(std::mt19937_64& rng, int slots, int max_depth) {
  Shape s;
  if (max_depth <= 1 || rng() % 4 == 0) {
    s.slot = static_cast<int>(rng() % slots);
    return s;
  }
  const auto pick = rng() % 3;
  if (pick == 0) {
    s.kind = Shape::kNot;
    s.children.push_back(RandomShape(rng, slots, max_depth - 1));
  } else {
    s.kind = pick == 1 ? Shape::kAnd : Shape::kOr;
    s.children.push_back(RandomShape(rng, slots, max_depth - 1));
    s.children.push_back(RandomShape(rng, slots, max_depth - 1));
  }
  return s;
}

// Source text where slot i is the atom `E.a<i> == 1`.
inline std::string ShapeSource(const Shape& s) {
  switch (s.kind) {
    case Shape::kLeaf: return "E.a" + std::to_string(s.slot) + " == 1";
    case Shape::kNot: return "!(" + ShapeSource(s.children[0]) + ")";
    case Shape::kAnd:
      return "(" + ShapeSource(s.children[0]) + ") && (" + ShapeSource(s.children[1]) + ")";
    case Shape::kOr:
      return "(" + ShapeSource(s.children[0]) + ") || (" + ShapeSource(s.children[1]) + ")";
  }
  return {};
}

inline Truth ShapeValue(const Shape& s, std::span<const Truth> slots) {
  switch (s.kind) {
    case Shape::kLeaf: return slots[s.slot];
    case Shape::kNot: return TableNot(ShapeValue(s.children[0], slots));
    case Shape::kAnd:
      return TableAnd(ShapeValue(s.children[0], slots), ShapeValue(s.children[1], slots));
    case Shape::kOr:
      return TableOr(ShapeValue(s.children[0], slots), ShapeValue(s.children[1], slots));
  }
  return kU;
}

// Resolver realizing a slot assignment: True -> fact 1, False -> fact 2,
// Unknown -> no fact.
inline MapResolver SlotResolver(std::span<const Truth> slots) {
  MapResolver r;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] == kT) r.Set("e", "a" + std::to_string(i), Num("1"));
    if (slots[i] == kF) r.Set("e", "a" + std::to_string(i), Num("2"));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Graph oracles.
// ---------------------------------------------------------------------------

// Reflexive-transitive reachability by Floyd-Warshall over an edge list.
inline std::vector<std::vector<bool>> Reachability(int n,
                                                   const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) r[i][i] = true;
  for (auto [a, b] : edges) r[a][b] = true;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!r[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (r[k][j]) r[i][j] = true;
      }
    }
  }
  return r;
}

// Nodes reachable from `root` (inclusive) by breadth-first search.
inline std::set<int> Bfs(int root, const std::vector<std::vector<int>>& children) {
  std::set<int> seen{root};
  std::vector<int> queue{root};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (int c : children[queue[head]]) {
      if (seen.insert(c).second) queue.push_back(c);
    }
  }
  return seen;
}

// ---------------------------------------------------------------------------
// Brute-force decision oracle over a small universe.
//
// Conditions are conjunctions/disjunctions of `Role.flag == "yes"` tests
// over boolean facts; the oracle evaluates them with the tables above.
// ---------------------------------------------------------------------------

struct FlagCond {
  enum Kind { kTrueConst, kFlag, kNot, kAnd, kOr } kind = kTrueConst;
  std::string role;  // "User" or "Owner"
  std::string flag;
  std::vector<FlagCond> children;
};

struct SmallFact {
  std::string entity;
  std::string flag;
};

struct SmallCaura {
  std::string id, user, role;
  FlagCond cond;
};

struct SmallCarpa {
  std::string id, role, resource, operation;
  bool grant = true;
  FlagCond cond;
};

struct SmallUniverse {
  std::vector<std::string> users;
  std::vector<std::string> roles;
  std::vector<std::pair<std::string, std::string>> role_edges;  // senior -> junior
  struct Res {
    std::string id, owner;
    std::vector<std::string> operations;
    std::vector<std::string> children;
  };
  std::vector<Res> resources;
  std::vector<SmallFact> facts;  // boolean facts; absent when not listed in values
  std::vector<SmallCaura> caura;
  std::vector<SmallCarpa> carpa;
};

inline std::string CondSource(const FlagCond& c) {
  switch (c.kind) {
    case FlagCond::kTrueConst: return "Env.always == \"yes\"";
    case FlagCond::kFlag: return c.role + "." + c.flag + " == \"yes\"";
    case FlagCond::kNot: return "!(" + CondSource(c.children[0]) + ")";
    case FlagCond::kAnd:
      return "(" + CondSource(c.children[0]) + ") && (" + CondSource(c.children[1]) + ")";
    case FlagCond::kOr:
      return "(" + CondSource(c.children[0]) + ") || (" + CondSource(c.children[1]) + ")";
  }
  return {};
}

// fact values: entity -> flag -> "yes"/"no"; missing means unknown.
using FlagFacts = std::map<std::string, std::map<std::string, std::string>>;

inline Truth CondValue(const FlagCond& c, const FlagFacts& facts, const std::string& user,
                       const std::string& owner) {
  switch (c.kind) {
    case FlagCond::kTrueConst: return kT;
    case FlagCond::kFlag: {
      const std::string& entity = c.role == "User" ? user : owner;
      auto e = facts.find(entity);
      if (e == facts.end()) return kU;
      auto f = e->second.find(c.flag);
      if (f == e->second.end()) return kU;
      return f->second == "yes" ? kT : kF;
    }
    case FlagCond::kNot: return TableNot(CondValue(c.children[0], facts, user, owner));
    case FlagCond::kAnd:
      return TableAnd(CondValue(c.children[0], facts, user, owner),
                      CondValue(c.children[1], facts, user, owner));
    case FlagCond::kOr:
      return TableOr(CondValue(c.children[0], facts, user, owner),
                     CondValue(c.children[1], facts, user, owner));
  }
  return kU;
}

struct OracleDecision {
  bool granted = false;
  std::set<std::string> active_roles;
};

// Direct reading of the assignment definitions: the user holds role r when
// some CAURA(u, r, c) has c True; r grants when some CARPA on a junior-or-
// equal role, on the resource or an ancestor, for the operation, has its
// condition True; any applicable denial wins.
inline OracleDecision OracleAuthorize(const SmallUniverse& u, const FlagFacts& facts,
                                      const std::string& user, const std::string& resource,
                                      const std::string& operation) {
  OracleDecision d;
  const SmallUniverse::Res* res = nullptr;
  for (const auto& r : u.resources) {
    if (r.id == resource) res = &r;
  }
  bool op_ok = false;
  for (const auto& op : res->operations) op_ok = op_ok || op == operation;
  if (!op_ok) return d;

  for (const auto& p : u.caura) {
    if (p.user == user && CondValue(p.cond, facts, user, res->owner) == kT) {
      d.active_roles.insert(p.role);
    }
  }

  auto index_of = [](const std::vector<std::string>& v, const std::string& x) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == x) return static_cast<int>(i);
    }
    return -1;
  };
  std::vector<std::pair<int, int>> role_edges;
  for (const auto& [s, j] : u.role_edges) {
    role_edges.push_back({index_of(u.roles, s), index_of(u.roles, j)});
  }
  const auto role_reach = Reachability(static_cast<int>(u.roles.size()), role_edges);

  std::vector<std::string> res_ids;
  for (const auto& r : u.resources) res_ids.push_back(r.id);
  std::vector<std::pair<int, int>> res_edges;
  for (const auto& r : u.resources) {
    for (const auto& c : r.children) res_edges.push_back({index_of(res_ids, r.id), index_of(res_ids, c)});
  }
  const auto res_reach = Reachability(static_cast<int>(res_ids.size()), res_edges);

  bool grant = false;
  bool deny = false;
  for (const auto& p : u.carpa) {
    if (p.operation != operation) continue;
    if (!res_reach[index_of(res_ids, p.resource)][index_of(res_ids, resource)]) continue;
    bool held = false;
    for (const auto& active : d.active_roles) {
      held = held || role_reach[index_of(u.roles, active)][index_of(u.roles, p.role)];
    }
    if (!held) continue;
    if (CondValue(p.cond, facts, user, res->owner) != kT) continue;
    (p.grant ? grant : deny) = true;
  }
  d.granted = grant && !deny;
  return d;
}

inline policy::StoreContents ToStoreContents(const SmallUniverse& u) {
  policy::StoreContents c;
  for (const auto& id : u.users) c.users[id] = policy::UserRecord{id, {}};
  for (const auto& id : u.roles) c.roles[id] = policy::RoleRecord{id, {}};
  for (const auto& [s, j] : u.role_edges) c.roles[s].juniors.insert(j);
  for (const auto& r : u.resources) {
    policy::ResourceRecord rec;
    rec.id = r.id;
    rec.owner = r.owner;
    rec.operations.insert(r.operations.begin(), r.operations.end());
    rec.children.insert(r.children.begin(), r.children.end());
    c.resources[r.id] = rec;
  }
  for (const auto& p : u.caura) {
    c.caura[p.id] = policy::CauraPolicy{p.id, p.user, p.role, csl::Parse(CondSource(p.cond))};
  }
  for (const auto& p : u.carpa) {
    c.carpa[p.id] = policy::CarpaPolicy{
        p.id, p.role, {p.resource, p.operation}, csl::Parse(CondSource(p.cond)),
        p.grant ? policy::Decision::kGranted : policy::Decision::kDenied};
  }
  return c;
}

// Random small universe: 3 users, 3 roles (R0 senior to R1 and R2), a parent
// resource with one child, and three boolean facts.
inline SmallUniverse RandomSmallUniverse(std::mt19937_64& rng, bool allow_deny) {
  SmallUniverse u;
  u.users = {"u0", "u1", "u2"};
  u.roles = {"R0", "R1", "R2"};
  u.role_edges = {{"R0", "R1"}, {"R0", "R2"}};
  u.resources = {{"Rec", "pat", {"read", "write"}, {"Part"}}, {"Part", "pat", {"read"}, {}}};
  u.facts = {{"u0", "onDuty"}, {"u1", "onDuty"}, {"pat", "critical"}};

  auto random_cond = [&](auto&& self, int depth) -> FlagCond {
    FlagCond c;
    const auto pick = rng() % (depth > 1 ? 6 : 3);
    if (pick == 0) return c;  // always true
    if (pick <= 2) {
      c.kind = FlagCond::kFlag;
      c.role = rng() % 3 == 0 ? "Owner" : "User";
      c.flag = c.role == "Owner" ? "critical" : "onDuty";
      return c;
    }
    if (pick == 3) {
      c.kind = FlagCond::kNot;
      c.children.push_back(self(self, depth - 1));
      return c;
    }
    c.kind = pick == 4 ? FlagCond::kAnd : FlagCond::kOr;
    c.children.push_back(self(self, depth - 1));
    c.children.push_back(self(self, depth - 1));
    return c;
  };

  int next = 0;
  for (const auto& user : u.users) {
    for (const auto& role : u.roles) {
      if (rng() % 2 == 0) continue;
      u.caura.push_back({"ca" + std::to_string(next++), user, role, random_cond(random_cond, 3)});
    }
  }
  for (const auto& role : u.roles) {
    for (const auto& res : u.resources) {
      for (const auto& op : res.operations) {
        if (rng() % 3 == 0) continue;
        const bool grant = !allow_deny || rng() % 4 != 0;
        u.carpa.push_back(
            {"cp" + std::to_string(next++), role, res.id, op, grant, random_cond(random_cond, 3)});
      }
    }
  }
  return u;
}

// All 2^n yes/no assignments of the universe's facts (absent facts are the
// Unknown case and are covered by users without facts).
inline std::vector<FlagFacts> FactCombinations(const SmallUniverse& u) {
  std::vector<FlagFacts> out;
  const std::size_t n = u.facts.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    FlagFacts f;
    for (std::size_t i = 0; i < n; ++i) {
      f[u.facts[i].entity][u.facts[i].flag] = (mask >> i) & 1 ? "yes" : "no";
    }
    f["env"]["always"] = "yes";
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace caac::testing
