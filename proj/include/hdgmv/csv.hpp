#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hdgmv/detail/format.hpp"
#include "hdgmv/errors.hpp"
#include "hdgmv/types.hpp"

// Returns-panel CSV format: a header row `date,<id>,<id>,...`, then one row
// per time point with an ISO-8601 date and one decimal return per asset.
// Lines starting with '#' carry provenance comments and are skipped. Parsing
// is strict: every malformed input gets its own diagnostic with coordinates.

namespace hdgmv {

struct ReturnsDataset {
  std::vector<std::string> asset_ids;
  std::vector<std::string> dates;   // strictly increasing ISO-8601
  Matrix returns;                   // p x T, one column per date

  Index asset_count() const { return returns.rows(); }
  Index length() const { return returns.cols(); }
};

namespace detail {

inline bool is_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  fields.push_back(field);
  return fields;
}

inline double parse_return_cell(const std::string& field, std::size_t row, std::size_t col) {
  if (field.empty())
    throw CsvFormatError("missing cell at row " + std::to_string(row) + ", column " +
                         std::to_string(col));
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    if (!std::isfinite(v)) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw CsvFormatError("non-numeric cell '" + field + "' at row " + std::to_string(row) +
                         ", column " + std::to_string(col));
  }
}

}  // namespace detail

inline ReturnsDataset parse_returns_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      if (!out.empty() && out[0] == '#') continue;
      return true;
    }
    return false;
  };

  if (!next_data_line(line)) throw CsvFormatError("empty file: no header row");
  const std::vector<std::string> header = detail::split_csv_line(line);
  if (header.empty() || header[0] != "date")
    throw CsvFormatError("header must start with a 'date' column");
  if (header.size() < 3)
    throw CsvFormatError("fewer than 2 assets in header (got " +
                         std::to_string(header.size() - 1) + ")");

  ReturnsDataset ds;
  ds.asset_ids.assign(header.begin() + 1, header.end());
  const std::size_t p = ds.asset_ids.size();

  std::vector<std::vector<double>> rows;
  std::set<std::string> seen_dates;
  while (next_data_line(line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = detail::split_csv_line(line);
    if (fields.size() != p + 1)
      throw CsvFormatError("ragged row " + std::to_string(line_no) + ": expected " +
                           std::to_string(p + 1) + " fields, got " +
                           std::to_string(fields.size()));
    const std::string& date = fields[0];
    if (!detail::is_iso_date(date))
      throw CsvFormatError("row " + std::to_string(line_no) + ": '" + date +
                           "' is not an ISO-8601 date");
    if (!seen_dates.insert(date).second)
      throw CsvFormatError("duplicate date '" + date + "' at row " + std::to_string(line_no));
    if (!ds.dates.empty() && !(ds.dates.back() < date))
      throw CsvFormatError("dates not strictly increasing at row " + std::to_string(line_no) +
                           " ('" + date + "' after '" + ds.dates.back() + "')");
    ds.dates.push_back(date);
    std::vector<double> row(p);
    for (std::size_t j = 0; j < p; ++j)
      row[j] = detail::parse_return_cell(fields[j + 1], line_no, j + 2);
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2)
    throw CsvFormatError("need at least 2 observation rows, got " + std::to_string(rows.size()));

  ds.returns.resize(static_cast<Index>(p), static_cast<Index>(rows.size()));
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t j = 0; j < p; ++j)
      ds.returns(static_cast<Index>(j), static_cast<Index>(t)) = rows[t][j];
  return ds;
}

inline ReturnsDataset load_returns_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvFormatError("cannot open returns file '" + path + "'");
  try {
    return parse_returns_csv(in);
  } catch (const CsvFormatError& e) {
    throw CsvFormatError(path + ": " + e.what());
  }
}

inline std::string returns_csv(const ReturnsDataset& ds, const std::string& comment = "") {
  std::ostringstream out;
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "date";
  for (const std::string& id : ds.asset_ids) out << ',' << id;
  out << "\n";
  for (Index t = 0; t < ds.length(); ++t) {
    out << ds.dates[static_cast<std::size_t>(t)];
    for (Index j = 0; j < ds.asset_count(); ++j)
      out << ',' << detail::format_double(ds.returns(j, t));
    out << "\n";
  }
  return out.str();
}

}  // namespace hdgmv
