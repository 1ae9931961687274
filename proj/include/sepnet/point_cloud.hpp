#pragma once

#include <span>
#include <vector>

#include "sepnet/network.hpp"

namespace sepnet {

// Finite sample of a compact subset of R^n; points are the columns of a
// dim x size matrix.
class PointCloud {
 public:
  PointCloud() = default;
  // Throws DomainError on non-finite coordinates, ShapeError on zero rows.
  explicit PointCloud(Matrix coords);
  static PointCloud from_points(std::span<const Vector> points);

  int dim() const { return static_cast<int>(coords_.rows()); }
  int size() const { return static_cast<int>(coords_.cols()); }
  bool empty() const { return coords_.cols() == 0; }
  Vector point(int i) const { return coords_.col(i); }
  const Matrix& coords() const { return coords_; }

  PointCloud subset(std::span<const int> indices) const;
  PointCloud concat(const PointCloud& other) const;

 private:
  Matrix coords_;
};

// min_q |p - q| over the cloud. Throws DomainError on an empty cloud.
double distance_to_cloud(const Vector& p, const PointCloud& cloud);
// min over pairs; 0 if the clouds share a point.
double cloud_distance(const PointCloud& a, const PointCloud& b);

// Samples of f on K.
struct LabeledCloud {
  PointCloud points;
  Vector values;

  int size() const { return points.size(); }
  int dim() const { return points.dim(); }
};

// Nonempty, matching sizes, finite values. Throws PreconditionError.
void validate(const LabeledCloud& cloud);

// Merges coincident points carrying equal values; throws PreconditionError
// when coincident points carry different values. Order of first occurrence is
// kept.
LabeledCloud deduplicate(const LabeledCloud& cloud);

}  // namespace sepnet
