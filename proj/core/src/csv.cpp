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

#include "sagdiv/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "sagdiv/error.hpp"

namespace sagdiv {
namespace {

bool read_record(std::istream& in, std::vector<std::string>& fields, long row) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c = 0;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      break;
    } else if (c == '\n') {
      break;
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw IngestionError("unterminated quoted field at row " + std::to_string(row), row);
  fields.push_back(std::move(field));
  return any;
}

double parse_number(const std::string& cell, long row, const std::string& column) {
  std::size_t begin = cell.find_first_not_of(" \t");
  std::size_t end = cell.find_last_not_of(" \t");
  if (begin == std::string::npos) {
    throw IngestionError("empty cell in column '" + column + "' at row " + std::to_string(row), row);
  }
  const char* first = cell.data() + begin;
  const char* last = cell.data() + end + 1;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw IngestionError("non-numeric cell '" + cell + "' in column '" + column + "' at row " +
                             std::to_string(row),
                         row);
  }
  return value;
}

struct IndexedColumns {
  std::vector<int> x;
  std::vector<int> z;
  int y = -1;
};

// Maps "prefix_k" headers to column positions, requiring k = 0..d-1 with no gaps.
std::vector<int> numbered_columns(const std::vector<std::string>& header, const std::string& prefix) {
  std::map<long, int> found;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& name = header[c];
    if (name.rfind(prefix + "_", 0) != 0) continue;
    const std::string digits = name.substr(prefix.size() + 1);
    long k = -1;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || k < 0) {
      throw IngestionError("unrecognized column '" + name + "'", 1);
    }
    if (!found.emplace(k, static_cast<int>(c)).second) {
      throw IngestionError("duplicate column '" + name + "'", 1);
    }
  }
  std::vector<int> out;
  for (const auto& [k, c] : found) {
    if (k != static_cast<long>(out.size())) {
      throw IngestionError("columns " + prefix + "_* are not numbered 0.." +
                               std::to_string(found.size() - 1),
                           1);
    }
    out.push_back(c);
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::vector<std::string> fields;
  long row = 1;
  if (!read_record(in, fields, row)) return table;
  table.header = fields;
  while (read_record(in, fields, ++row)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != table.header.size()) {
      throw IngestionError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(table.header.size()),
                           row);
    }
    table.rows.push_back(fields);
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_csv(in);
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  if (table.header.empty()) throw IngestionError("empty data file", 1);
  IndexedColumns cols;
  cols.x = numbered_columns(table.header, "x");
  cols.z = numbered_columns(table.header, "z");
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto& name = table.header[c];
    if (name == "y") {
      if (cols.y >= 0) throw IngestionError("duplicate column 'y'", 1);
      cols.y = static_cast<int>(c);
    } else if (name.rfind("x_", 0) != 0 && name.rfind("z_", 0) != 0) {
      throw IngestionError("unexpected column '" + name + "'", 1);
    }
  }
  if (cols.x.empty() || cols.z.empty() || cols.y < 0) {
    throw IngestionError("data file needs x_*, z_* and y columns", 1);
  }
  if (table.rows.empty()) throw IngestionError("data file has no rows", 2);
  const auto n = static_cast<Index>(table.rows.size());
  Matrix x(n, static_cast<Index>(cols.x.size()));
  Matrix z(n, static_cast<Index>(cols.z.size()));
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    const auto& r = table.rows[static_cast<std::size_t>(i)];
    const long row = static_cast<long>(i) + 2;
    for (std::size_t j = 0; j < cols.x.size(); ++j) {
      x(i, static_cast<Index>(j)) = parse_number(r[cols.x[j]], row, table.header[cols.x[j]]);
    }
    for (std::size_t j = 0; j < cols.z.size(); ++j) {
      z(i, static_cast<Index>(j)) = parse_number(r[cols.z[j]], row, table.header[cols.z[j]]);
    }
    y(i) = parse_number(r[cols.y], row, "y");
  }
  return Dataset(std::move(x), std::move(z), std::move(y));
}

Matrix read_covariates_csv(const std::filesystem::path& path, Index expected_dim) {
  const CsvTable table = read_csv(path);
  if (table.header.empty()) return Matrix(0, expected_dim);
  const std::vector<int> cols = numbered_columns(table.header, "x");
  if (static_cast<Index>(cols.size()) != expected_dim) {
    throw InvalidInput("covariate file has " + std::to_string(cols.size()) +
                       " x columns, model expects " + std::to_string(expected_dim));
  }
  const auto n = static_cast<Index>(table.rows.size());
  Matrix x(n, expected_dim);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < expected_dim; ++j) {
      const int c = cols[static_cast<std::size_t>(j)];
      x(i, j) = parse_number(table.rows[static_cast<std::size_t>(i)][c], static_cast<long>(i) + 2,
                             table.header[c]);
    }
  }
  return x;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << '\n';
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  auto out = open_output(path);
  std::vector<std::string> header;
  for (Index j = 0; j < data.x_dim(); ++j) header.push_back("x_" + std::to_string(j));
  for (Index j = 0; j < data.z_dim(); ++j) header.push_back("z_" + std::to_string(j));
  header.push_back("y");
  write_csv_row(out, header);
  std::vector<std::string> fields(header.size());
  for (Index i = 0; i < data.size(); ++i) {
    std::size_t k = 0;
    for (Index j = 0; j < data.x_dim(); ++j) fields[k++] = format_double(data.x()(i, j));
    for (Index j = 0; j < data.z_dim(); ++j) fields[k++] = format_double(data.z()(i, j));
    fields[k] = format_double(data.y()(i));
    write_csv_row(out, fields);
  }
}

void write_matrix_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const Matrix& values) {
  if (static_cast<Index>(header.size()) != values.cols()) {
    throw InvalidInput("header and matrix widths differ");
  }
  auto out = open_output(path);
  write_csv_row(out, header);
  std::vector<std::string> fields(header.size());
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) fields[static_cast<std::size_t>(j)] = format_double(values(i, j));
    write_csv_row(out, fields);
  }
}

}  // namespace sagdiv
