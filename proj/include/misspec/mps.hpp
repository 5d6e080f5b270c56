// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// MPS reader (fixed or whitespace-separated free format) for NETLIB-style
// linear programs. Only the feasible region is kept: the objective row is
// parsed and then dropped when converting to an LpModel.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "misspec/lp.hpp"
#include "misspec/regions.hpp"

namespace misspec {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, std::size_t line, std::string section, const std::string& message);

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& section() const noexcept { return section_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string section_;
};

struct MpsRow {
  std::string name;
  char type;  // 'N', 'L', 'G' or 'E'
  bool operator==(const MpsRow&) const = default;
};

struct MpsCoefficient {
  std::string column;
  std::string row;
  double value;
  bool operator==(const MpsCoefficient&) const = default;
};

/// An RHS or RANGES entry; `set` may be empty in fixed-format files.
struct MpsRowValue {
  std::string set;
  std::string row;
  double value;
  bool operator==(const MpsRowValue&) const = default;
};

struct MpsBound {
  std::string type;  // UP LO FX FR MI PL BV
  std::string set;
  std::string column;
  double value;  // 0 for FR MI PL BV
  bool operator==(const MpsBound&) const = default;
};

struct MpsProblem {
  std::string name;
  std::vector<MpsRow> rows;  // including every N row
  std::string objective_row;  // the first N row
  std::vector<std::string> columns;  // order of first appearance
  std::vector<MpsCoefficient> column_entries;
  std::vector<MpsRowValue> rhs_entries;
  std::vector<MpsRowValue> range_entries;
  std::vector<MpsBound> bound_entries;

  /// NETLIB counts the objective among the rows.
  std::size_t num_rows() const noexcept { return rows.size(); }
  std::size_t num_columns() const noexcept { return columns.size(); }

  bool operator==(const MpsProblem&) const = default;
};

MpsProblem parse_mps(std::istream& in, const std::string& file = "<input>");
MpsProblem parse_mps_file(const std::filesystem::path& path);

/// Free-format MPS text that parse_mps reads back to an equal MpsProblem.
std::string write_mps(const MpsProblem& problem);

/// Constraint rows, ranges and bounds as an LpModel over the columns in
/// order. Only the first RHS, RANGES and BOUNDS set is used; N rows other
/// than the objective are ignored. A ranged row becomes a >= row followed
/// by a <= row. BV relaxes to [0, 1]; UP with a negative value on a column
/// whose lower bound is still 0 makes the lower bound -inf.
LpModel to_lp_model(const MpsProblem& problem);

Region to_region(const MpsProblem& problem);

}  // namespace misspec
