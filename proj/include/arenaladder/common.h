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

#ifndef ARENALADDER_COMMON_H_
#define ARENALADDER_COMMON_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace arenaladder {

enum class Side : std::uint8_t { kLeft = 0, kRight = 1 };

constexpr Side other(Side s) {
  return s == Side::kLeft ? Side::kRight : Side::kLeft;
}
constexpr int index(Side s) { return static_cast<int>(s); }
std::string_view to_string(Side s);
Side parse_side(std::string_view text);

enum class Outcome : std::uint8_t { kLeftWin, kRightWin, kDraw };

std::string_view to_string(Outcome o);
Outcome parse_outcome(std::string_view text);

// Score of `side` for an outcome on the win-rate scale: win 1, draw 1/2,
// loss 0, expressed in halves so it stays integral.
int half_points(Outcome o, Side side);

// Error hierarchy. Usage errors are programmer/caller mistakes (exit 2 at
// the CLI), everything else is a runtime failure (exit 1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::size_t measured)
      : Error(what), measured_(measured) {}
  std::size_t measured() const { return measured_; }

 private:
  std::size_t measured_;
};

// Portable deterministic random source. The std distributions are
// implementation-defined, so sampling helpers live here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent stream seed from a base seed and a tuple of
// indices (pair, match index, ...).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0,
                          std::uint64_t d = 0);

// 64-bit FNV-1a, used for state digests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// SHA-256 hex digest, used for file content digests.
std::string sha256_hex(std::string_view bytes);

}  // namespace arenaladder

#endif  // ARENALADDER_COMMON_H_
