#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "aaegd/error.hpp"
#include "aaegd/objectives.hpp"

namespace aaegd {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
  const std::string_view text = trim(cell);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  // from_chars rejects a leading '+'.
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    fail(ErrorKind::ParseError, "row " + std::to_string(row) + ", column " + std::to_string(col) +
                                    ": cannot parse '" + std::string(text) + "' as a number");
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

Dataset load_csv_dataset(const std::filesystem::path& path, std::size_t label_column, bool has_header) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto cells = split(line);
    if (rows.empty()) {
      width = cells.size();
    } else if (cells.size() != width) {
      fail(ErrorKind::RaggedRows, "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                      " columns, expected " + std::to_string(width));
    }
    std::vector<double> values;
    values.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) values.push_back(parse_cell(cells[c], line_no, c));
    rows.push_back(std::move(values));
  }

  if (rows.empty()) fail(ErrorKind::ParseError, path.string() + " contains no data rows");
  if (width < 2) fail(ErrorKind::ParseError, "need at least one feature column and one label column");
  if (label_column >= width)
    fail(ErrorKind::ParseError, "label column " + std::to_string(label_column) + " out of range (" +
                                    std::to_string(width) + " columns)");

  const auto n_rows = static_cast<Index>(rows.size());
  const auto n_features = static_cast<Index>(width - 1);
  Dataset out{Matrix(n_rows, n_features), Vector(n_rows)};
  for (Index i = 0; i < n_rows; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    Index col = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (c == label_column)
        out.targets(i) = row[c];
      else
        out.features(i, col++) = row[c];
    }
  }
  return out;
}

}  // namespace aaegd
