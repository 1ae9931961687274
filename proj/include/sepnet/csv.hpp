#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sepnet/point_cloud.hpp"

namespace sepnet {

// Point-cloud CSV: a header row, then one row per point. The last column
// holds values iff its header is "value"; every other column is a
// coordinate.
struct CsvCloud {
  std::vector<std::string> header;
  PointCloud points;
  std::optional<Vector> values;
};

// Throws ParseError with the offending line number.
CsvCloud parse_csv(std::string_view text);
CsvCloud read_csv(const std::filesystem::path& path);

// Requires a value column.
LabeledCloud read_labeled_csv(const std::filesystem::path& path);
// Any value column is ignored.
PointCloud read_points_csv(const std::filesystem::path& path);

// Header x1..xn (plus "value" when given), 17 significant digits.
std::string format_csv(const PointCloud& points, const Vector* values);
void write_csv(const std::filesystem::path& path, const PointCloud& points, const Vector* values);

}  // namespace sepnet
