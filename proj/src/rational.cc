// Copyright 2026 The ArenaLadder Authors.
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

#include "arenaladder/rational.h"

#include <charconv>
#include <cmath>

#include "arenaladder/common.h"

namespace arenaladder {

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("malformed rational '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw ConfigError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = parse_int(text.substr(0, slash), text);
    const auto den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    const bool negative = !int_part.empty() && int_part.front() == '-';
    if (negative) int_part.remove_prefix(1);
    if (frac_part.size() > 15) {
      throw ConfigError("too many decimals in '" + std::string(text) + "'");
    }
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    const std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    const std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    Rational r(whole * den + frac, den);
    return negative ? -r : r;
  }
  return Rational(parse_int(text, text));
}

Exact to_exact(const Rational& r) {
  Exact q(mpz_class(std::to_string(r.numerator())),
          mpz_class(std::to_string(r.denominator())));
  q.canonicalize();
  return q;
}

Exact to_exact(double d) {
  if (!std::isfinite(d)) throw Error("non-finite value in exact conversion");
  return Exact(d);
}

std::string to_string(const Exact& q) { return q.get_str(); }

Exact parse_exact(std::string_view text) {
  if (text.find('.') != std::string_view::npos) {
    return to_exact(parse_rational(text));
  }
  Exact q;
  if (q.set_str(std::string(text), 10) != 0) {
    throw ConfigError("malformed rational '" + std::string(text) + "'");
  }
  q.canonicalize();
  return q;
}

}  // namespace arenaladder
