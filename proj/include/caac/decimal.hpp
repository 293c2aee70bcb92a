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

#include <algorithm>
#include <charconv>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace caac {

// Decimal number that keeps its source spelling and compares by exact
// rational value. Grammar: optional '-', digits, optional '.' digits.
class Decimal {
 public:
  Decimal() : Decimal(*Parse("0")) {}

  static std::optional<Decimal> Parse(std::string_view text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && text[pos] == '-') {
      negative = true;
      ++pos;
    }
    const std::size_t int_begin = pos;
    while (pos < text.size() && IsDigit(text[pos])) ++pos;
    if (pos == int_begin) return std::nullopt;
    std::string_view int_part = text.substr(int_begin, pos - int_begin);
    std::string_view frac_part;
    if (pos < text.size() && text[pos] == '.') {
      const std::size_t frac_begin = ++pos;
      while (pos < text.size() && IsDigit(text[pos])) ++pos;
      if (pos == frac_begin) return std::nullopt;
      frac_part = text.substr(frac_begin, pos - frac_begin);
    }
    if (pos != text.size()) return std::nullopt;

    Decimal d(Tag{});
    d.text_ = std::string(text);
    while (int_part.size() > 1 && int_part.front() == '0') int_part.remove_prefix(1);
    while (!frac_part.empty() && frac_part.back() == '0') frac_part.remove_suffix(1);
    d.int_digits_ = int_part == "0" ? std::string() : std::string(int_part);
    d.frac_digits_ = std::string(frac_part);
    d.negative_ = negative && !(d.int_digits_.empty() && d.frac_digits_.empty());
    return d;
  }

  static Decimal FromInteger(long long value) {
    return *Parse(std::to_string(value));
  }

  // Shortest fixed-notation spelling that round-trips the double.
  static std::optional<Decimal> FromDouble(double value) {
    char buf[400];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value,
                                   std::chars_format::fixed);
    if (ec != std::errc()) return std::nullopt;
    return Parse(std::string_view(buf, static_cast<std::size_t>(end - buf)));
  }

  const std::string& text() const { return text_; }
  bool is_integer() const { return frac_digits_.empty(); }

  double ToDouble() const { return std::stod(text_); }

  // Exact numeric comparison; "1.50" and "1.5" compare equal.
  static std::strong_ordering Compare(const Decimal& a, const Decimal& b) {
    if (a.negative_ != b.negative_) {
      return a.negative_ ? std::strong_ordering::less
                         : std::strong_ordering::greater;
    }
    const std::strong_ordering magnitude = CompareMagnitude(a, b);
    return a.negative_ ? 0 <=> magnitude : magnitude;
  }

  static bool NumericEqual(const Decimal& a, const Decimal& b) {
    return Compare(a, b) == std::strong_ordering::equal;
  }

  // Structural equality: the spelling must match.
  friend bool operator==(const Decimal& a, const Decimal& b) {
    return a.text_ == b.text_;
  }

 private:
  struct Tag {};
  explicit Decimal(Tag) {}

  static bool IsDigit(char c) { return c >= '0' && c <= '9'; }

  static std::strong_ordering CompareMagnitude(const Decimal& a,
                                               const Decimal& b) {
    if (a.int_digits_.size() != b.int_digits_.size()) {
      return a.int_digits_.size() <=> b.int_digits_.size();
    }
    if (auto c = a.int_digits_.compare(b.int_digits_); c != 0) {
      return c <=> 0;
    }
    const std::size_t n =
        std::max(a.frac_digits_.size(), b.frac_digits_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const char da = i < a.frac_digits_.size() ? a.frac_digits_[i] : '0';
      const char db = i < b.frac_digits_.size() ? b.frac_digits_[i] : '0';
      if (da != db) return da <=> db;
    }
    return std::strong_ordering::equal;
  }

  std::string text_;
  bool negative_ = false;
  std::string int_digits_;   // no leading zeros; empty for zero
  std::string frac_digits_;  // no trailing zeros
};

}  // namespace caac
