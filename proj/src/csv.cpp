#include "sepnet/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sepnet/errors.hpp"

namespace sepnet {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_number(std::string_view cell, int line_no) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError("csv line " + std::to_string(line_no) + ": not a finite number: '" + std::string(cell) + "'");
  }
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

CsvCloud parse_csv(std::string_view text) {
  CsvCloud out;
  std::vector<std::vector<double>> rows;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (out.header.empty()) {
      for (auto c : cells) {
        if (c.empty()) throw ParseError("csv line " + std::to_string(line_no) + ": empty header cell");
        out.header.emplace_back(c);
      }
      continue;
    }
    if (cells.size() != out.header.size()) {
      throw ParseError("csv line " + std::to_string(line_no) + ": expected " + std::to_string(out.header.size()) +
                       " columns, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) row.push_back(parse_number(c, line_no));
    rows.push_back(std::move(row));
  }
  if (out.header.empty()) throw ParseError("csv: missing header row");
  const bool has_values = out.header.back() == "value";
  const int dim = static_cast<int>(out.header.size()) - (has_values ? 1 : 0);
  if (dim < 1) throw ParseError("csv: no coordinate columns");
  if (rows.empty()) throw ParseError("csv: no data rows");

  Matrix coords(dim, static_cast<Eigen::Index>(rows.size()));
  Vector values(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (int i = 0; i < dim; ++i) coords(i, static_cast<Eigen::Index>(j)) = rows[j][static_cast<std::size_t>(i)];
    if (has_values) values(static_cast<Eigen::Index>(j)) = rows[j].back();
  }
  out.points = PointCloud(std::move(coords));
  if (has_values) out.values = std::move(values);
  return out;
}

CsvCloud read_csv(const std::filesystem::path& path) {
  try {
    return parse_csv(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

LabeledCloud read_labeled_csv(const std::filesystem::path& path) {
  CsvCloud csv = read_csv(path);
  if (!csv.values) throw ParseError(path.string() + ": labeled cloud needs a final 'value' column");
  return LabeledCloud{std::move(csv.points), std::move(*csv.values)};
}

PointCloud read_points_csv(const std::filesystem::path& path) { return read_csv(path).points; }

std::string format_csv(const PointCloud& points, const Vector* values) {
  std::ostringstream out;
  out.precision(17);
  for (int i = 0; i < points.dim(); ++i) out << (i ? "," : "") << 'x' << i + 1;
  if (values != nullptr) out << ",value";
  out << '\n';
  for (int j = 0; j < points.size(); ++j) {
    for (int i = 0; i < points.dim(); ++i) out << (i ? "," : "") << points.coords()(i, j);
    if (values != nullptr) out << ',' << (*values)(j);
    out << '\n';
  }
  return out.str();
}

void write_csv(const std::filesystem::path& path, const PointCloud& points, const Vector* values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << format_csv(points, values);
}

}  // namespace sepnet
