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

// Line-oriented request/context scripts run through the enforcement point.
//
//   REQ <user> <resource> <operation>
//   CTX <entity> <attribute> <value>     value: number, "string", bare word,
//                                        or [item, item, ...]
//   EXPECT <Granted|Denied>              checks the preceding REQ
//   # comment

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "caac/csl.hpp"
#include "caac/error.hpp"
#include "caac/pep_service.hpp"

namespace caac::scenario {

namespace detail {

inline std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Drops a trailing `# comment` that is not inside a quoted string.
inline std::string_view StripComment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

inline std::vector<std::string_view> SplitWords(std::string_view s, std::size_t max_words) {
  std::vector<std::string_view> out;
  s = Trim(s);
  while (!s.empty()) {
    if (out.size() + 1 == max_words) {
      out.push_back(s);
      break;
    }
    const auto end = s.find_first_of(" \t");
    out.push_back(s.substr(0, end));
    if (end == std::string_view::npos) break;
    s = Trim(s.substr(end));
  }
  return out;
}

inline csl::Literal ParseScalar(std::string_view s, const std::string& where) {
  s = Trim(s);
  if (s.empty()) throw ParseError(where + ": empty value");
  if (s.front() == '"') {
    std::vector<csl::detail::Token> tokens;
    try {
      tokens = csl::detail::Lexer(s).Tokenize();
    } catch (const SyntaxError& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (tokens.size() != 2 || tokens[0].kind != csl::detail::Tok::kString) {
      throw ParseError(where + ": malformed quoted value");
    }
    return csl::Literal::String(tokens[0].text);
  }
  if (auto d = Decimal::Parse(s)) return csl::Literal::Number(*d);
  return csl::Literal::String(std::string(s));
}

}  // namespace detail

inline csl::FactValue ParseValue(std::string_view text, const std::string& where) {
  text = detail::Trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw ParseError(where + ": unterminated list value");
    std::string_view inner = detail::Trim(text.substr(1, text.size() - 2));
    csl::ListValue list;
    bool quoted = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= inner.size(); ++i) {
      if (i < inner.size() && inner[i] == '\\' && quoted) {
        ++i;
        continue;
      }
      if (i < inner.size() && inner[i] == '"') quoted = !quoted;
      if (i == inner.size() || (inner[i] == ',' && !quoted)) {
        if (!inner.empty()) list.push_back(detail::ParseScalar(inner.substr(start, i - start), where));
        start = i + 1;
      }
    }
    return list;
  }
  return detail::ParseScalar(text, where);
}

struct ScenarioResult {
  std::string transcript;
  int failed_expectations = 0;

  bool ok() const { return failed_expectations == 0; }
};

namespace detail {

inline std::string JoinOrDash(const auto& items) {
  std::string out;
  for (const auto& i : items) out += (out.empty() ? "" : ",") + std::string(i);
  return out.empty() ? "-" : out;
}

}  // namespace detail

// Executes `script` against `service`. Parse errors carry `name:line`.
inline ScenarioResult RunScenario(pep::PepService& service, std::string_view script,
                                  const std::string& name = "script") {
  ScenarioResult result;
  std::ostringstream out;
  std::optional<policy::Decision> last;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= script.size()) {
    const std::size_t nl = script.find('\n', pos);
    std::string_view raw = script.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                                             : nl - pos);
    pos = nl == std::string_view::npos ? script.size() + 1 : nl + 1;
    ++line_no;
    const std::string where = name + ":" + std::to_string(line_no);
    std::string_view line = detail::Trim(detail::StripComment(raw));
    if (line.empty()) continue;

    auto words = detail::SplitWords(line, 4);
    const std::string_view cmd = words[0];
    if (cmd == "REQ") {
      if (words.size() != 4 || words[3].find_first_of(" \t") != std::string_view::npos) {
        throw ParseError(where + ": expected REQ <user> <resource> <operation>");
      }
      pdp::AccessRequest request{std::string(words[1]), std::string(words[2]),
                                 std::string(words[3])};
      out << "REQ " << request.user << ' ' << request.resource << ' ' << request.operation
          << " -> ";
      try {
        auto r = service.HandleAccessRequest(request);
        const auto& d = r.decision;
        out << policy::ToString(d.outcome) << " [" << pdp::ToString(d.reason)
            << "] roles=" << detail::JoinOrDash(d.activated_roles)
            << " policies=" << detail::JoinOrDash(d.matched_policies);
        if (r.session) out << " session=" << *r.session;
        last = d.outcome;
      } catch (const UnknownTarget& e) {
        out << "error: " << e.what();
        last.reset();
      }
      out << '\n';
    } else if (cmd == "CTX") {
      if (words.size() != 4) {
        throw ParseError(where + ": expected CTX <entity> <attribute> <value>");
      }
      csl::FactValue value = ParseValue(words[3], where);
      out << "CTX " << words[1] << ' ' << words[2] << ' ' << csl::ToCsl(value) << " -> ";
      auto revoked =
          service.HandleContextUpdate(std::string(words[1]), std::string(words[2]), value);
      out << "revoked=" << detail::JoinOrDash(revoked) << '\n';
    } else if (cmd == "EXPECT") {
      if (words.size() != 2) throw ParseError(where + ": expected EXPECT <Granted|Denied>");
      auto expected = policy::DecisionFromString(words[1]);
      if (!expected) throw ParseError(where + ": EXPECT takes Granted or Denied");
      if (!last) throw ParseError(where + ": EXPECT without a preceding decided REQ");
      out << "EXPECT " << words[1] << " -> ";
      if (*expected == *last) {
        out << "ok\n";
      } else {
        out << "FAILED (got " << policy::ToString(*last) << ")\n";
        ++result.failed_expectations;
      }
    } else {
      throw ParseError(where + ": unknown command '" + std::string(cmd) + "'");
    }
  }
  result.transcript = out.str();
  return result;
}

}  // namespace caac::scenario
