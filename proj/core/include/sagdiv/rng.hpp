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

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace sagdiv {

using Rng = std::mt19937_64;

/// Deterministic seed derivation: splitmix64 over the parent seed mixed with an
/// FNV-1a hash of `name` and an optional index. `derive_seed(s, "dgp", 3)` is
/// the documented substream for repetition 3's data.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view name, std::uint64_t index = 0);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);

/// Uniformly shuffled 0..n-1.
std::vector<std::ptrdiff_t> permutation(std::ptrdiff_t n, std::uint64_t seed);

/// A permutation of 0..n-1 with no fixed points (n >= 2).
std::vector<std::ptrdiff_t> derangement(std::ptrdiff_t n, std::uint64_t seed);

/// `count` distinct indices from 0..n-1, in ascending order.
std::vector<std::ptrdiff_t> subsample(std::ptrdiff_t n, std::ptrdiff_t count, std::uint64_t seed);

}  // namespace sagdiv
