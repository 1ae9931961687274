#pragma once

#include <random>
#include <vector>

#include "sepnet/network.hpp"
#include "sepnet/point_cloud.hpp"

namespace sepnet::testing {

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

inline Vector random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
  return random_matrix(rng, n, 1, scale).col(0);
}

// Random network with the given hidden widths (size = hidden depth) and
// output dimension.
inline Network random_network(std::mt19937_64& rng, int input_dim, const std::vector<int>& hidden, Activation act,
                              int output_dim = 1) {
  std::vector<Layer> layers;
  int in = input_dim;
  for (int w : hidden) {
    layers.push_back(Layer{AffineLayer::dense(random_matrix(rng, w, in), random_vector(rng, w)), true});
    in = w;
  }
  layers.push_back(Layer{AffineLayer::dense(random_matrix(rng, output_dim, in), random_vector(rng, output_dim)), false});
  return Network(input_dim, act, std::move(layers));
}

inline Activation random_activation(std::mt19937_64& rng) {
  const int k = std::uniform_int_distribution<int>(0, 2)(rng);
  return k == 0 ? Activation::kLogistic : k == 1 ? Activation::kTanh : Activation::kRelu;
}

inline PointCloud random_cloud(std::mt19937_64& rng, int dim, int count, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(dim, count);
  for (int j = 0; j < count; ++j)
    for (int i = 0; i < dim; ++i) m(i, j) = u(rng);
  return PointCloud(std::move(m));
}

inline PointCloud cloud_of(std::initializer_list<std::initializer_list<double>> pts) {
  std::vector<Vector> v;
  for (const auto& p : pts) {
    Vector x(static_cast<Eigen::Index>(p.size()));
    int i = 0;
    for (double c : p) x(i++) = c;
    v.push_back(x);
  }
  return PointCloud::from_points(v);
}

}  // namespace sepnet::testing
