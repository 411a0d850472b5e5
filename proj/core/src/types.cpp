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

#include "sagdiv/types.hpp"

#include <string>

#include "sagdiv/error.hpp"

namespace sagdiv {

bool all_finite(const Matrix& m) { return m.allFinite(); }

Dataset::Dataset(Matrix x, Matrix z, Vector y) : x_(std::move(x)), z_(std::move(z)), y_(std::move(y)) {
  const Index n = y_.size();
  if (n < 1) throw InvalidInput("dataset needs at least one row");
  if (x_.rows() != n || z_.rows() != n) {
    throw InvalidInput("dataset blocks disagree on row count: x=" + std::to_string(x_.rows()) +
                       " z=" + std::to_string(z_.rows()) + " y=" + std::to_string(n));
  }
  if (x_.cols() < 1 || z_.cols() < 1) throw InvalidInput("dataset needs d_X >= 1 and d_Z >= 1");
  if (!x_.allFinite() || !z_.allFinite() || !y_.allFinite()) {
    throw InvalidInput("dataset contains non-finite entries");
  }
}

Dataset Dataset::slice(Index begin, Index count) const {
  if (begin < 0 || count < 1 || begin + count > size()) {
    throw InvalidInput("dataset slice out of range");
  }
  return Dataset(x_.middleRows(begin, count), z_.middleRows(begin, count),
                 y_.segment(begin, count));
}

Dataset Dataset::select(std::span<const Index> rows) const {
  return Dataset(select_rows(x_, rows), select_rows(z_, rows), select_rows(y_, rows));
}

Matrix select_rows(const Matrix& m, std::span<const Index> rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= m.rows()) throw InvalidInput("row index out of range");
    out.row(static_cast<Index>(i)) = m.row(rows[i]);
  }
  return out;
}

Vector select_rows(const Vector& v, std::span<const Index> rows) {
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= v.size()) throw InvalidInput("row index out of range");
    out(static_cast<Index>(i)) = v(rows[i]);
  }
  return out;
}

}  // namespace sagdiv
