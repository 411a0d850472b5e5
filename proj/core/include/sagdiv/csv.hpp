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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sagdiv/types.hpp"

namespace sagdiv {

/// Parsed CSV: header row plus string cells. Quoting follows RFC 4180.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Throws IngestionError on ragged rows or unterminated quotes. Row numbers in
/// errors are 1-based over physical records, the header being row 1.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Data file with header x_0..x_{dX-1}, z_0..z_{dZ-1}, y (any column order).
Dataset read_dataset_csv(const std::filesystem::path& path);

/// Covariate file with header x_0..x_{d-1}. A file with only a header, or an
/// empty file, yields zero rows of dimension `expected_dim`.
Matrix read_covariates_csv(const std::filesystem::path& path, Index expected_dim);

/// Round-trip representation: 17 significant digits.
std::string format_double(double value);
std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);
void write_matrix_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const Matrix& values);

}  // namespace sagdiv
