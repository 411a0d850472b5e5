// Copyright 2026 The sagdiv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sagdiv/rng.hpp"

#include <algorithm>
#include <numeric>

#include "sagdiv/error.hpp"

namespace sagdiv {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view name, std::uint64_t index) {
  return splitmix64(splitmix64(parent ^ fnv1a64(name)) + index);
}

// Fisher-Yates with an explicit uniform draw; std::shuffle's exact sequence is
// implementation-defined.
namespace {
std::ptrdiff_t uniform_below(Rng& rng, std::ptrdiff_t bound) {
  const auto b = static_cast<std::uint64_t>(bound);
  const std::uint64_t limit = Rng::max() - Rng::max() % b;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return static_cast<std::ptrdiff_t>(draw % b);
}
}  // namespace

std::vector<std::ptrdiff_t> permutation(std::ptrdiff_t n, std::uint64_t seed) {
  std::vector<std::ptrdiff_t> p(static_cast<std::size_t>(std::max<std::ptrdiff_t>(n, 0)));
  std::iota(p.begin(), p.end(), 0);
  Rng rng(seed);
  for (std::ptrdiff_t i = n - 1; i > 0; --i) {
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(uniform_below(rng, i + 1))]);
  }
  return p;
}

std::vector<std::ptrdiff_t> derangement(std::ptrdiff_t n, std::uint64_t seed) {
  if (n < 2) throw InvalidInput("derangement needs at least two elements");
  // Sattolo's algorithm: a uniform cyclic permutation, which has no fixed points.
  std::vector<std::ptrdiff_t> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  Rng rng(seed);
  for (std::ptrdiff_t i = n - 1; i > 0; --i) {
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(uniform_below(rng, i))]);
  }
  return p;
}

std::vector<std::ptrdiff_t> subsample(std::ptrdiff_t n, std::ptrdiff_t count, std::uint64_t seed) {
  if (count > n || count < 0) throw InvalidInput("subsample larger than population");
  auto p = permutation(n, seed);
  p.resize(static_cast<std::size_t>(count));
  std::sort(p.begin(), p.end());
  return p;
}

}  // namespace sagdiv
