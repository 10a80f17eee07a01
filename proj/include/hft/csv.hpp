#pragma once

#include <charconv>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hft/error.hpp"
#include "hft/matrix.hpp"

namespace hft {

// Numeric table with a header row. Comment lines ('#'-prefixed) are kept together with
// the number of data rows that precede them so that re-emission is byte-identical.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<Vector> rows;
  std::vector<std::pair<std::size_t, std::string>> comments;

  void add_row(Vector row) {
    require(row.size() == header.size(), "CsvTable: row width does not match header");
    rows.push_back(std::move(row));
  }
  void add_comment(std::string text) { comments.emplace_back(rows.size(), std::move(text)); }

  std::size_t column(std::string_view name) const {
    for (std::size_t j = 0; j < header.size(); ++j)
      if (header[j] == name) return j;
    throw PreconditionError("CsvTable: no column '" + std::string(name) + "'");
  }
};

// Shortest form that holds 17 significant digits; locale independent.
inline std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string format_fixed(double x, int decimals) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

inline std::string to_csv(const CsvTable& t) {
  std::string out;
  std::size_t next_comment = 0;
  auto flush_comments = [&](std::size_t before_row) {
    while (next_comment < t.comments.size() && t.comments[next_comment].first == before_row)
      out += t.comments[next_comment++].second + '\n';
  };
  for (std::size_t j = 0; j < t.header.size(); ++j) out += (j ? "," : "") + t.header[j];
  out += '\n';
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    flush_comments(i);
    for (std::size_t j = 0; j < t.rows[i].size(); ++j) {
      if (j) out += ',';
      out += format_number(t.rows[i][j]);
    }
    out += '\n';
  }
  flush_comments(t.rows.size());
  return out;
}

inline CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.front() == '#') {
      t.comments.emplace_back(t.rows.size(), std::string(line));
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!have_header) {
      for (auto f : fields) t.header.emplace_back(f);
      have_header = true;
      continue;
    }
    require(fields.size() == t.header.size(),
            "parse_csv: line " + std::to_string(line_no) + " has wrong number of fields");
    Vector row;
    for (auto f : fields) {
      double x = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), x);
      require(res.ec == std::errc() && res.ptr == f.data() + f.size(),
              "parse_csv: line " + std::to_string(line_no) + ": bad number '" + std::string(f) + "'");
      row.push_back(x);
    }
    t.rows.push_back(std::move(row));
  }
  require(have_header, "parse_csv: missing header");
  return t;
}

}  // namespace hft
