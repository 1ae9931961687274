#include "sepnet/point_cloud.hpp"

#include <limits>
#include <map>
#include <sstream>

#include "sepnet/errors.hpp"

namespace sepnet {

PointCloud::PointCloud(Matrix coords) : coords_(std::move(coords)) {
  if (coords_.rows() < 1) throw ShapeError("point cloud needs dimension >= 1");
  if (!coords_.allFinite()) throw DomainError("point cloud has non-finite coordinates");
}

PointCloud PointCloud::from_points(std::span<const Vector> points) {
  if (points.empty()) throw DomainError("from_points: no points");
  Matrix m(points.front().size(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != m.rows()) throw ShapeError("from_points: points of different dimension");
    m.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  return PointCloud(std::move(m));
}

PointCloud PointCloud::subset(std::span<const int> indices) const {
  Matrix m(coords_.rows(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = coords_.col(indices[k]);
  PointCloud out;
  out.coords_ = std::move(m);
  return out;
}

PointCloud PointCloud::concat(const PointCloud& other) const {
  if (empty()) return other;
  if (other.empty()) return *this;
  if (other.dim() != dim()) throw ShapeError("concat: clouds of different dimension");
  Matrix m(coords_.rows(), coords_.cols() + other.coords_.cols());
  m << coords_, other.coords_;
  return PointCloud(std::move(m));
}

double distance_to_cloud(const Vector& p, const PointCloud& cloud) {
  if (cloud.empty()) throw DomainError("distance to an empty cloud");
  if (p.size() != cloud.dim()) throw ShapeError("distance_to_cloud: dimension mismatch");
  return (cloud.coords().colwise() - p).colwise().norm().minCoeff();
}

double cloud_distance(const PointCloud& a, const PointCloud& b) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.size(); ++i) best = std::min(best, distance_to_cloud(a.point(i), b));
  return best;
}

void validate(const LabeledCloud& cloud) {
  if (cloud.points.empty()) throw PreconditionError("labeled cloud is empty");
  if (cloud.values.size() != cloud.points.size()) {
    std::ostringstream msg;
    msg << "labeled cloud has " << cloud.points.size() << " points but " << cloud.values.size() << " values";
    throw PreconditionError(msg.str());
  }
  if (!cloud.values.allFinite()) throw PreconditionError("labeled cloud has non-finite values");
}

LabeledCloud deduplicate(const LabeledCloud& cloud) {
  validate(cloud);
  const int n = cloud.dim();
  auto key_of = [&](int i) {
    std::vector<double> k(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) k[static_cast<std::size_t>(d)] = cloud.points.coords()(d, i);
    return k;
  };
  std::map<std::vector<double>, int> seen;
  std::vector<int> keep;
  for (int i = 0; i < cloud.size(); ++i) {
    auto [it, inserted] = seen.emplace(key_of(i), i);
    if (inserted) {
      keep.push_back(i);
    } else if (cloud.values(it->second) != cloud.values(i)) {
      std::ostringstream msg;
      msg << "points " << it->second << " and " << i << " coincide but carry values " << cloud.values(it->second)
          << " and " << cloud.values(i);
      throw PreconditionError(msg.str());
    }
  }
  LabeledCloud out;
  out.points = cloud.points.subset(keep);
  out.values.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.values(static_cast<Eigen::Index>(k)) = cloud.values(keep[k]);
  return out;
}

}  // namespace sepnet
