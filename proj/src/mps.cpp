// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "misspec/mps.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "misspec/errors.hpp"

namespace misspec {
namespace {

enum class Section { kNone, kName, kRows, kColumns, kRhs, kRanges, kBounds, kEnd };

const char* section_name(Section s) {
  switch (s) {
    case Section::kNone: return "";
    case Section::kName: return "NAME";
    case Section::kRows: return "ROWS";
    case Section::kColumns: return "COLUMNS";
    case Section::kRhs: return "RHS";
    case Section::kRanges: return "RANGES";
    case Section::kBounds: return "BOUNDS";
    case Section::kEnd: return "ENDATA";
  }
  return "";
}

std::optional<Section> section_keyword(const std::string& word) {
  static const std::map<std::string, Section> kKeywords = {
      {"NAME", Section::kName},     {"ROWS", Section::kRows},     {"COLUMNS", Section::kColumns},
      {"RHS", Section::kRhs},       {"RANGES", Section::kRanges}, {"BOUNDS", Section::kBounds},
      {"ENDATA", Section::kEnd}};
  const auto it = kKeywords.find(word);
  if (it == kKeywords.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::optional<double> to_number(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

class Parser {
 public:
  explicit Parser(std::string file) : file_(std::move(file)) {}

  MpsProblem run(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '*') continue;
      const auto tokens = split(line);
      if (tokens.empty()) continue;
      if (line[0] != ' ' && line[0] != '\t') {
        header(tokens, line);
        if (section_ == Section::kEnd) break;
        continue;
      }
      data(tokens);
    }
    if (section_ != Section::kEnd) fail("missing ENDATA");
    if (p_.objective_row.empty()) fail("no N (objective) row");
    return std::move(p_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(file_, line_no_, section_name(section_), message);
  }

  double number(const std::string& s) const {
    const auto v = to_number(s);
    if (!v) fail("malformed number '" + s + "'");
    return *v;
  }

  void require_row(const std::string& row) const {
    if (!row_index_.contains(row)) fail("reference to undeclared row '" + row + "'");
  }

  void header(const std::vector<std::string>& tokens, const std::string& line) {
    const auto next = section_keyword(tokens[0]);
    if (!next) fail("unknown section '" + tokens[0] + "'");
    if (*next == Section::kName) {
      if (section_ != Section::kNone) fail("NAME must come first");
      const auto pos = line.find_first_not_of(" \t", 4);
      p_.name = pos == std::string::npos ? "" : line.substr(pos);
      while (!p_.name.empty() && (p_.name.back() == ' ' || p_.name.back() == '\t')) {
        p_.name.pop_back();
      }
    } else if (*next <= section_) {
      fail(std::string("section ") + section_name(*next) + " out of order");
    } else if (*next > Section::kColumns && section_ < Section::kColumns) {
      fail(std::string("section ") + section_name(*next) + " before COLUMNS");
    } else if (*next == Section::kColumns && section_ != Section::kRows) {
      fail("COLUMNS must follow ROWS");
    } else if (*next == Section::kRows && section_ != Section::kName) {
      fail("ROWS must follow NAME");
    }
    section_ = *next;
  }

  void data(const std::vector<std::string>& t) {
    switch (section_) {
      case Section::kRows: return row(t);
      case Section::kColumns: return column(t);
      case Section::kRhs: return row_values(t, p_.rhs_entries);
      case Section::kRanges: return row_values(t, p_.range_entries);
      case Section::kBounds: return bound(t);
      default: fail("data line outside a section");
    }
  }

  void row(const std::vector<std::string>& t) {
    if (t.size() != 2) fail("expected '<type> <name>'");
    if (t[0].size() != 1 || std::string("NLGE").find(t[0][0]) == std::string::npos) {
      fail("unknown row type '" + t[0] + "'");
    }
    if (!row_index_.emplace(t[1], p_.rows.size()).second) fail("duplicate row '" + t[1] + "'");
    p_.rows.push_back({t[1], t[0][0]});
    if (t[0][0] == 'N' && p_.objective_row.empty()) p_.objective_row = t[1];
  }

  void column(const std::vector<std::string>& t) {
    if (t.size() >= 2 && t[1] == "'MARKER'") return;
    if (t.size() != 3 && t.size() != 5) fail("expected '<column> <row> <value> [<row> <value>]'");
    if (column_set_.insert(t[0]).second) p_.columns.push_back(t[0]);
    for (std::size_t k = 1; k + 1 < t.size(); k += 2) {
      require_row(t[k]);
      p_.column_entries.push_back({t[0], t[k], number(t[k + 1])});
    }
  }

  void row_values(const std::vector<std::string>& t, std::vector<MpsRowValue>& out) {
    if (t.size() < 2 || t.size() > 5) fail("expected '[<set>] <row> <value> [<row> <value>]'");
    // An even token count means the set name field was left blank.
    const bool has_set = t.size() % 2 == 1;
    const std::string set = has_set ? t[0] : "";
    for (std::size_t k = has_set ? 1 : 0; k + 1 < t.size(); k += 2) {
      require_row(t[k]);
      out.push_back({set, t[k], number(t[k + 1])});
    }
  }

  void bound(const std::vector<std::string>& t) {
    static const std::set<std::string> kNeedsValue = {"UP", "LO", "FX"};
    static const std::set<std::string> kNoValue = {"FR", "MI", "PL", "BV"};
    if (t.empty()) return;
    const std::string& type = t[0];
    const bool needs_value = kNeedsValue.contains(type);
    if (!needs_value && !kNoValue.contains(type)) fail("unknown bound type '" + type + "'");

    MpsBound b{type, "", "", 0.0};
    if (needs_value) {
      if (t.size() == 4) {
        b.set = t[1], b.column = t[2], b.value = number(t[3]);
      } else if (t.size() == 3) {
        b.column = t[1], b.value = number(t[2]);
      } else {
        fail("expected '" + type + " [<set>] <column> <value>'");
      }
    } else {
      if (t.size() == 2) {
        b.column = t[1];
      } else if (t.size() == 3 && column_set_.contains(t[1]) && to_number(t[2])) {
        b.column = t[1];
      } else if (t.size() == 3) {
        b.set = t[1], b.column = t[2];
      } else if (t.size() == 4) {
        b.set = t[1], b.column = t[2];
        number(t[3]);
      } else {
        fail("expected '" + type + " [<set>] <column>'");
      }
    }
    if (!column_set_.contains(b.column)) fail("reference to undeclared column '" + b.column + "'");
    p_.bound_entries.push_back(std::move(b));
  }

  std::string file_;
  std::size_t line_no_ = 0;
  Section section_ = Section::kNone;
  MpsProblem p_;
  std::unordered_map<std::string, std::size_t> row_index_;
  std::set<std::string> column_set_;
};

std::string format_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

ParseError::ParseError(std::string file, std::size_t line, std::string section,
                       const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) +
                         (section.empty() ? "" : " [" + section + "]") + ": " + message),
      file_(std::move(file)),
      line_(line),
      section_(std::move(section)) {}

MpsProblem parse_mps(std::istream& in, const std::string& file) {
  return Parser(file).run(in);
}

MpsProblem parse_mps_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "", "cannot open file");
  return parse_mps(in, path.string());
}

std::string write_mps(const MpsProblem& p) {
  std::ostringstream os;
  os << "NAME          " << p.name << "\nROWS\n";
  for (const auto& r : p.rows) os << " " << r.type << "  " << r.name << "\n";
  os << "COLUMNS\n";
  for (const auto& e : p.column_entries) {
    os << "    " << e.column << "  " << e.row << "  " << format_number(e.value) << "\n";
  }
  auto values = [&](const char* header, const std::vector<MpsRowValue>& entries) {
    if (entries.empty()) return;
    os << header << "\n";
    for (const auto& e : entries) {
      os << "    " << (e.set.empty() ? "" : e.set + "  ") << e.row << "  "
         << format_number(e.value) << "\n";
    }
  };
  values("RHS", p.rhs_entries);
  values("RANGES", p.range_entries);
  if (!p.bound_entries.empty()) {
    os << "BOUNDS\n";
    for (const auto& b : p.bound_entries) {
      os << " " << b.type << " " << (b.set.empty() ? "" : b.set + "  ") << b.column;
      if (b.type == "UP" || b.type == "LO" || b.type == "FX") os << "  " << format_number(b.value);
      os << "\n";
    }
  }
  os << "ENDATA\n";
  return os.str();
}

LpModel to_lp_model(const MpsProblem& p) {
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t j = 0; j < p.columns.size(); ++j) col.emplace(p.columns[j], j);
  const std::size_t n = p.columns.size();

  // Constraint rows in file order, skipping every N row.
  std::unordered_map<std::string, std::size_t> crow;
  std::vector<const MpsRow*> cons;
  for (const auto& r : p.rows) {
    if (r.type == 'N') continue;
    crow.emplace(r.name, cons.size());
    cons.push_back(&r);
  }
  const std::size_t m = cons.size();
  std::vector<double> a(m * n, 0.0);
  for (const auto& e : p.column_entries) {
    const auto it = crow.find(e.row);
    if (it == crow.end()) continue;
    a[it->second * n + col.at(e.column)] += e.value;
  }

  auto first_set = [](const auto& entries) {
    return entries.empty() ? std::string() : entries.front().set;
  };
  std::vector<double> rhs(m, 0.0);
  const std::string rhs_set = first_set(p.rhs_entries);
  for (const auto& e : p.rhs_entries) {
    if (e.set != rhs_set) continue;
    const auto it = crow.find(e.row);
    if (it != crow.end()) rhs[it->second] = e.value;
  }
  std::vector<std::optional<double>> range(m);
  const std::string range_set = first_set(p.range_entries);
  for (const auto& e : p.range_entries) {
    if (e.set != range_set) continue;
    const auto it = crow.find(e.row);
    if (it != crow.end()) range[it->second] = e.value;
  }

  LpBuilder builder(n);
  for (std::size_t i = 0; i < m; ++i) {
    const std::span<const double> row(a.data() + i * n, n);
    const char type = cons[i]->type;
    if (!range[i]) {
      const RowSense sense = type == 'L'   ? RowSense::kLessEqual
                             : type == 'G' ? RowSense::kGreaterEqual
                                           : RowSense::kEqual;
      builder.add_row(row, sense, rhs[i]);
      continue;
    }
    const double r = *range[i];
    double lo = rhs[i], hi = rhs[i];
    if (type == 'L') {
      lo = rhs[i] - std::abs(r);
    } else if (type == 'G') {
      hi = rhs[i] + std::abs(r);
    } else if (r > 0) {
      hi = rhs[i] + r;
    } else {
      lo = rhs[i] + r;
    }
    if (lo == hi) {
      builder.add_row(row, RowSense::kEqual, lo);
    } else {
      builder.add_row(row, RowSense::kGreaterEqual, lo);
      builder.add_row(row, RowSense::kLessEqual, hi);
    }
  }

  std::vector<double> lower(n, 0.0), upper(n, kInf);
  const std::string bound_set = first_set(p.bound_entries);
  for (const auto& b : p.bound_entries) {
    if (b.set != bound_set) continue;
    const std::size_t j = col.at(b.column);
    if (b.type == "UP") {
      upper[j] = b.value;
      if (b.value < 0.0 && lower[j] == 0.0) lower[j] = -kInf;
    } else if (b.type == "LO") {
      lower[j] = b.value;
    } else if (b.type == "FX") {
      lower[j] = upper[j] = b.value;
    } else if (b.type == "FR") {
      lower[j] = -kInf;
      upper[j] = kInf;
    } else if (b.type == "MI") {
      lower[j] = -kInf;
    } else if (b.type == "PL") {
      upper[j] = kInf;
    } else if (b.type == "BV") {
      lower[j] = 0.0;
      upper[j] = 1.0;
    }
  }
  for (std::size_t j = 0; j < n; ++j) builder.set_bounds(j, lower[j], upper[j]);
  return builder.build();
}

Region to_region(const MpsProblem& problem) { return Region::polytope(to_lp_model(problem)); }

}  // namespace misspec
