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

#include <cstdint>
#include <filesystem>
#include <string>

#include "sagdiv/models.hpp"

namespace sagdiv {

inline constexpr int kModelFormatVersion = 1;

struct Provenance {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

/// A fitted model plus the metadata needed to trust it later. Stored as a
/// versioned JSON document; doubles are written in shortest round-trip form, so
/// a reload reproduces predictions bit for bit.
struct PersistedModel {
  Method method = Method::Zero;
  FittedModel model = ZeroModel{};
  Provenance provenance{};
};

std::string serialize_model(const PersistedModel& model);
PersistedModel deserialize_model(const std::string& text);

void save_model(const PersistedModel& model, const std::filesystem::path& path);
PersistedModel load_model(const std::filesystem::path& path);

}  // namespace sagdiv
