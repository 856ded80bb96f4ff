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

#ifndef ARENALADDER_RATIONAL_H_
#define ARENALADDER_RATIONAL_H_

#include <gmpxx.h>

#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <string_view>

namespace arenaladder {

// Small exact rationals for engine quantities (rewards, chip fraction).
// Compare only against Rational values: with C++20 rewritten comparisons,
// boost 1.74 recurses forever on rational == int.
using Rational = boost::rational<std::int64_t>;

// Arbitrary-precision rationals for solvers (LP, exact best response).
// mpq_class(num, den) does not reduce; build fractions with frac().
using Exact = mpq_class;

inline Exact frac(long num, long den) {
  Exact q(num, 1);
  q /= den;
  return q;
}

double to_double(const Rational& r);
std::string to_string(const Rational& r);
// Accepts "3", "-3/4" and finite decimals such as "0.25".
Rational parse_rational(std::string_view text);

Exact to_exact(const Rational& r);
// Exact conversion of a binary double.
Exact to_exact(double d);
std::string to_string(const Exact& q);
Exact parse_exact(std::string_view text);

// Scalar conversion used by algorithms templated on double / Exact.
template <class Scalar>
Scalar scalar_from(double d);
template <>
inline double scalar_from<double>(double d) {
  return d;
}
template <>
inline Exact scalar_from<Exact>(double d) {
  return to_exact(d);
}

inline double to_double(const Exact& q) { return q.get_d(); }
inline double to_double(double d) { return d; }

}  // namespace arenaladder

#endif  // ARENALADDER_RATIONAL_H_
