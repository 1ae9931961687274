#include "sepnet/targets.hpp"

#include <charconv>
#include <cmath>

#include "sepnet/errors.hpp"

namespace sepnet {

const std::vector<Target>& target_catalog() {
  static const std::vector<Target> catalog = {
      {"linear", "f(x) = x1 + ... + xn", [](const Vector& x) { return x.sum(); }},
      {"sinprod", "f(x) = sin(3 x1) * cos(2 x2) * ... * cos(2 xn)",
       [](const Vector& x) {
         double v = std::sin(3.0 * x(0));
         for (Eigen::Index i = 1; i < x.size(); ++i) v *= std::cos(2.0 * x(i));
         return v;
       }},
      {"runge", "f(x) = 1 / (1 + 25 |x|^2)", [](const Vector& x) { return 1.0 / (1.0 + 25.0 * x.squaredNorm()); }},
      {"step-smooth", "f(x) = (1 + tanh(10 (x1 - 0.5))) / 2",
       [](const Vector& x) { return 0.5 * (1.0 + std::tanh(10.0 * (x(0) - 0.5))); }},
  };
  return catalog;
}

const Target& find_target(std::string_view name) {
  std::string known;
  for (const Target& t : target_catalog()) {
    if (t.name == name) return t;
    known += (known.empty() ? "" : ", ") + t.name;
  }
  throw ConfigError("unknown target '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<GridAxis> parse_grid(std::string_view spec) {
  const auto fail = [&](const std::string& why) {
    return ParseError("grid spec '" + std::string(spec) + "': " + why);
  };
  const auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw fail("bad number '" + std::string(s) + "'");
    }
    return v;
  };
  std::vector<GridAxis> axes;
  std::size_t start = 0;
  while (true) {
    const auto comma = spec.find(',', start);
    const std::string_view part = spec.substr(start, comma == std::string_view::npos ? comma : comma - start);
    const auto c1 = part.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : part.find(':', c1 + 1);
    if (c2 == std::string_view::npos || part.find(':', c2 + 1) != std::string_view::npos) {
      throw fail("expected lo:hi:count");
    }
    GridAxis axis;
    axis.lo = number(part.substr(0, c1));
    axis.hi = number(part.substr(c1 + 1, c2 - c1 - 1));
    const std::string_view count = part.substr(c2 + 1);
    const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), axis.count);
    if (count.empty() || ec != std::errc() || ptr != count.data() + count.size() || axis.count < 1) {
      throw fail("count must be a positive integer");
    }
    if (axis.hi < axis.lo || (axis.hi == axis.lo && axis.count > 1)) throw fail("need lo < hi for count > 1");
    axes.push_back(axis);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return axes;
}

PointCloud grid_points(const std::vector<GridAxis>& axes) {
  if (axes.empty()) throw DomainError("grid_points: no axes");
  const int n = static_cast<int>(axes.size());
  Eigen::Index total = 1;
  for (const GridAxis& a : axes) total *= a.count;
  Matrix coords(n, total);
  std::vector<int> idx(axes.size(), 0);
  for (Eigen::Index j = 0; j < total; ++j) {
    for (int d = 0; d < n; ++d) {
      const GridAxis& a = axes[static_cast<std::size_t>(d)];
      const int k = idx[static_cast<std::size_t>(d)];
      coords(d, j) = a.count == 1 ? a.lo : a.lo + (a.hi - a.lo) * k / (a.count - 1);
    }
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < axes[static_cast<std::size_t>(d)].count) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  return PointCloud(std::move(coords));
}

LabeledCloud sample_target(const Target& target, const PointCloud& points) {
  Vector values(points.size());
  for (int j = 0; j < points.size(); ++j) values(j) = target.fn(points.point(j));
  return LabeledCloud{points, std::move(values)};
}

}  // namespace sepnet
