#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <span>
#include <vector>

#include "sepnet/activation.hpp"

namespace sepnet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Every network the library emits has at most this many activated layers.
inline constexpr int kMaxHiddenDepth = 2;

// x -> W x + b. Stored sparse: merged networks carry block-diagonal layers
// whose dense form would be mostly zeros.
struct AffineLayer {
  SparseMatrix weights;
  Vector bias;

  AffineLayer() = default;
  AffineLayer(SparseMatrix w, Vector b);

  static AffineLayer dense(const Matrix& w, const Vector& b);
  static AffineLayer identity(int dim);
  // x -> x + shift.
  static AffineLayer translation(const Vector& shift);

  int in_dim() const { return static_cast<int>(weights.cols()); }
  int out_dim() const { return static_cast<int>(weights.rows()); }
  Matrix dense_weights() const { return Matrix(weights); }
};

struct Layer {
  AffineLayer affine;
  bool activated = false;
};

struct NetworkStats {
  int hidden_depth = 0;
  std::vector<int> widths;
  long long parameter_count = 0;
};

// A layered feed-forward network: affine maps alternating with a single
// activation kind. The last layer is never activated, so outputs are linear
// combinations of the final hidden units. Immutable once constructed.
class Network {
 public:
  // Validates dimension chaining, finiteness, the unactivated output layer and
  // the depth cap. Throws ShapeError / DomainError / DepthBudgetError.
  Network(int input_dim, Activation act, std::vector<Layer> layers);

  // Depth-0 network returning `value` everywhere.
  static Network constant(int input_dim, double value, Activation act = Activation::kLogistic);
  // Depth-0 network realizing the given affine map.
  static Network affine(AffineLayer map, Activation act = Activation::kLogistic);

  int input_dim() const { return input_dim_; }
  int output_dim() const { return layers_.back().affine.out_dim(); }
  int hidden_depth() const;
  Activation activation() const { return activation_; }
  const std::vector<Layer>& layers() const { return layers_; }

  // Forward pass on one point. Throws ShapeError on dimension mismatch.
  Vector eval(const Vector& x) const;
  // Forward pass on the columns of `points` (input_dim x count); returns
  // output_dim x count.
  Matrix eval_batch(const Matrix& points) const;
  // Convenience for scalar networks: one value per column.
  Vector eval_scalar(const Matrix& points) const;

 private:
  int input_dim_;
  Activation activation_;
  std::vector<Layer> layers_;
};

Vector eval_network(const Network& net, const Vector& x);

// constant + sum_i coeffs[i] * nets[i], realized as a single network of the
// same hidden depth: hidden layers are block-concatenated, output rows merged.
Network affine_combine(std::span<const Network> nets, std::span<const double> coeffs, double constant);

// net o map, folding the map into the first affine layer.
Network precompose_affine(const Network& net, const AffineLayer& map);

// outer o inner for scalar inner output and scalar outer input. The inner
// output row is folded into the outer first layer; depths add.
Network compose_scalar(const Network& outer, const Network& inner);

NetworkStats network_stats(const Network& net);

}  // namespace sepnet
