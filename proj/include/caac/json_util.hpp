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

// Strict JSON reading shared by the policy and context file loaders.

#include <charconv>
#include <cstdlib>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "caac/csl.hpp"
#include "caac/error.hpp"

namespace caac::json_util {

using nlohmann::json;

inline std::string LineColumn(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return std::to_string(line) + ":" + std::to_string(column);
}

// Parses `text`, rejecting duplicate object keys anywhere in the document.
inline json ParseStrict(std::string_view text, std::string_view what) {
  std::vector<std::set<std::string>> keys;
  json::parser_callback_t cb = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        keys.emplace_back();
        break;
      case json::parse_event_t::object_end:
        keys.pop_back();
        break;
      case json::parse_event_t::key: {
        const std::string key = parsed.get<std::string>();
        if (!keys.back().insert(key).second) {
          throw SchemaError(std::string(what) + ": duplicate key '" + key + "'");
        }
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return json::parse(text.begin(), text.end(), cb);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ":" + LineColumn(text, e.byte) +
                     ": invalid JSON: " + e.what());
  }
}

inline void CheckObject(const json& j, std::string_view what,
                        std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw SchemaError(std::string(what) + ": expected an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || item.key() == a;
    if (!ok) {
      throw SchemaError(std::string(what) + ": unknown key '" + item.key() + "'");
    }
  }
}

inline const json& Require(const json& j, std::string_view key, std::string_view what) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(std::string(what) + ": missing required key '" +
                      std::string(key) + "'");
  }
  return *it;
}

inline std::string RequireString(const json& j, std::string_view key,
                                 std::string_view what) {
  const json& v = Require(j, key, what);
  if (!v.is_string()) {
    throw SchemaError(std::string(what) + ": '" + std::string(key) +
                      "' must be a string");
  }
  std::string s = v.get<std::string>();
  if (s.empty()) {
    throw SchemaError(std::string(what) + ": '" + std::string(key) +
                      "' must not be empty");
  }
  return s;
}

inline std::vector<std::string> StringArray(const json& j, std::string_view key,
                                            std::string_view what,
                                            bool required = false) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (required) Require(j, key, what);
    return {};
  }
  if (!it->is_array()) {
    throw SchemaError(std::string(what) + ": '" + std::string(key) +
                      "' must be an array of strings");
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw SchemaError(std::string(what) + ": '" + std::string(key) +
                        "' must be an array of strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

inline csl::Literal LiteralFromJson(const json& j, std::string_view what) {
  if (j.is_string()) return csl::Literal::String(j.get<std::string>());
  if (j.is_number_integer()) {
    return csl::Literal::Number(*Decimal::Parse(j.dump()));
  }
  if (j.is_number_float()) {
    if (auto d = Decimal::FromDouble(j.get<double>())) return csl::Literal::Number(*d);
  }
  throw SchemaError(std::string(what) + ": expected a string or number literal");
}

inline json LiteralToJson(const csl::Literal& lit) {
  if (lit.is_string()) return lit.as_string();
  const std::string& text = lit.as_number().text();
  if (lit.as_number().is_integer()) {
    long long v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc() && end == text.data() + text.size()) return v;
  }
  return std::strtod(text.c_str(), nullptr);
}

inline csl::FactValue FactValueFromJson(const json& j, std::string_view what) {
  if (j.is_array()) {
    csl::ListValue list;
    for (const auto& item : j) list.push_back(LiteralFromJson(item, what));
    return list;
  }
  return LiteralFromJson(j, what);
}

inline json FactValueToJson(const csl::FactValue& value) {
  if (const auto* lit = std::get_if<csl::Literal>(&value)) return LiteralToJson(*lit);
  json arr = json::array();
  for (const auto& lit : std::get<csl::ListValue>(value)) arr.push_back(LiteralToJson(lit));
  return arr;
}

}  // namespace caac::json_util
