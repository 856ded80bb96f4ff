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

#include "arenaladder/common.h"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

namespace arenaladder {

std::string_view to_string(Side s) {
  return s == Side::kLeft ? "left" : "right";
}

Side parse_side(std::string_view text) {
  if (text == "left") return Side::kLeft;
  if (text == "right") return Side::kRight;
  throw UsageError("unknown side '" + std::string(text) +
                   "' (expected left or right)");
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kLeftWin:
      return "left";
    case Outcome::kRightWin:
      return "right";
    case Outcome::kDraw:
      return "draw";
  }
  return "draw";
}

Outcome parse_outcome(std::string_view text) {
  if (text == "left") return Outcome::kLeftWin;
  if (text == "right") return Outcome::kRightWin;
  if (text == "draw") return Outcome::kDraw;
  throw UsageError("unknown outcome '" + std::string(text) + "'");
}

int half_points(Outcome o, Side side) {
  if (o == Outcome::kDraw) return 1;
  const bool left_won = o == Outcome::kLeftWin;
  return (left_won == (side == Side::kLeft)) ? 2 : 0;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c, std::uint64_t d) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t v : {a, b, c, d}) h = splitmix64(h ^ splitmix64(v + 1));
  return h;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx",
                static_cast<unsigned long long>(v));
  return std::string(buf.data(), 16);
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(),
             nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

}  // namespace arenaladder
