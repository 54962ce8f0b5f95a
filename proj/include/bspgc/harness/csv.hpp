// Copyright 2026 The BSPGC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bspgc/errors.hpp"
#include "bspgc/linalg.hpp"

namespace bspgc::harness {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

// Locale-independent; rejects trailing garbage and non-finite values.
inline bool parse_double(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace detail

// Comma-separated numbers, one observation per line. The first non-empty
// line is treated as a header when any of its cells is not numeric. Rows
// are reported by their 1-based line number.
inline Matrix parse_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool first = true;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_commas(line);
    std::vector<double> row(cells.size());
    std::size_t bad = 0;
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (!detail::parse_double(cells[c], row[c]) && bad == 0) bad = c + 1;
    if (first) {
      first = false;
      cols = cells.size();
      if (bad != 0) continue;  // header
    }
    if (cells.size() != cols)
      throw ParseError(line_no, 0,
                       "expected " + std::to_string(cols) + " fields, found " +
                           std::to_string(cells.size()));
    if (bad != 0)
      throw ParseError(line_no, bad,
                       "not a number: '" + std::string(cells[bad - 1]) + "'");
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) throw ParseError(line_no, 0, "no numeric rows");
  Matrix x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::copy(values.begin(), values.end(), x.data());
  return x;
}

inline Matrix parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_csv(in);
}

inline Matrix load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_csv(in);
}

}  // namespace bspgc::harness
