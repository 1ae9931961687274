#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sepnet/point_cloud.hpp"

namespace sepnet {

// Built-in target functions for synthesis runs.
struct Target {
  std::string name;
  std::string formula;
  std::function<double(const Vector&)> fn;
};

const std::vector<Target>& target_catalog();
// Throws ConfigError naming the known targets.
const Target& find_target(std::string_view name);

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
};

// "lo:hi:count[,lo:hi:count...]", one triple per axis; count >= 1, and
// lo <= hi (lo == hi only with count 1). Throws ParseError.
std::vector<GridAxis> parse_grid(std::string_view spec);

// Tensor grid, last coordinate varying fastest; count 1 places the axis at lo.
PointCloud grid_points(const std::vector<GridAxis>& axes);

LabeledCloud sample_target(const Target& target, const PointCloud& points);

}  // namespace sepnet
