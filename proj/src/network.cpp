#include "sepnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "sepnet/errors.hpp"

namespace sepnet {

namespace {

using Triplet = Eigen::Triplet<double>;

bool all_finite(const SparseMatrix& m) {
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      if (!std::isfinite(it.value())) return false;
    }
  }
  return true;
}

void append_block(std::vector<Triplet>& out, const SparseMatrix& block, int row0, int col0, double scale = 1.0) {
  for (int r = 0; r < block.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(block, r); it; ++it) {
      out.emplace_back(row0 + static_cast<int>(it.row()), col0 + static_cast<int>(it.col()), scale * it.value());
    }
  }
}

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& trips) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

void apply_in_place(Activation act, Matrix& z) {
  z = z.unaryExpr([act](double v) { return apply_activation(act, v); });
}

}  // namespace

AffineLayer::AffineLayer(SparseMatrix w, Vector b) : weights(std::move(w)), bias(std::move(b)) {
  weights.makeCompressed();
  if (weights.rows() != bias.size()) {
    std::ostringstream msg;
    msg << "affine layer: weights have " << weights.rows() << " rows but bias has " << bias.size() << " entries";
    throw ShapeError(msg.str());
  }
}

AffineLayer AffineLayer::dense(const Matrix& w, const Vector& b) { return AffineLayer(w.sparseView(0.0, 0.0), b); }

AffineLayer AffineLayer::identity(int dim) {
  SparseMatrix id(dim, dim);
  id.setIdentity();
  return AffineLayer(id, Vector::Zero(dim));
}

AffineLayer AffineLayer::translation(const Vector& shift) {
  AffineLayer layer = identity(static_cast<int>(shift.size()));
  layer.bias = shift;
  return layer;
}

Network::Network(int input_dim, Activation act, std::vector<Layer> layers)
    : input_dim_(input_dim), activation_(act), layers_(std::move(layers)) {
  if (input_dim_ < 1) throw ShapeError("network input_dim must be positive");
  if (layers_.empty()) throw ShapeError("network has no layers");
  int expected = input_dim_;
  int depth = 0;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const AffineLayer& a = layers_[k].affine;
    if (a.in_dim() != expected) {
      std::ostringstream msg;
      msg << "layer " << k << " expects input of size " << a.in_dim() << " but receives " << expected;
      throw ShapeError(msg.str());
    }
    if (a.bias.size() != a.out_dim()) throw ShapeError("layer " + std::to_string(k) + ": bias size mismatch");
    if (a.out_dim() < 1) throw ShapeError("layer " + std::to_string(k) + " has no outputs");
    if (!all_finite(a.weights) || !a.bias.allFinite()) {
      throw DomainError("layer " + std::to_string(k) + " has non-finite parameters");
    }
    if (layers_[k].activated) ++depth;
    expected = a.out_dim();
  }
  if (layers_.back().activated) throw ShapeError("the output layer must not carry an activation");
  if (depth > kMaxHiddenDepth) {
    throw DepthBudgetError("network would have " + std::to_string(depth) + " hidden layers (cap is 2)");
  }
}

Network Network::constant(int input_dim, double value, Activation act) {
  SparseMatrix w(1, input_dim);
  Vector b(1);
  b(0) = value;
  return Network(input_dim, act, {Layer{AffineLayer(w, b), false}});
}

Network Network::affine(AffineLayer map, Activation act) {
  const int in = map.in_dim();
  return Network(in, act, {Layer{std::move(map), false}});
}

int Network::hidden_depth() const {
  int depth = 0;
  for (const Layer& l : layers_) depth += l.activated ? 1 : 0;
  return depth;
}

Vector Network::eval(const Vector& x) const {
  if (x.size() != input_dim_) {
    std::ostringstream msg;
    msg << "point has dimension " << x.size() << ", network expects " << input_dim_;
    throw ShapeError(msg.str());
  }
  Matrix col = x;
  return eval_batch(col).col(0);
}

Matrix Network::eval_batch(const Matrix& points) const {
  if (points.rows() != input_dim_) {
    std::ostringstream msg;
    msg << "points have dimension " << points.rows() << ", network expects " << input_dim_;
    throw ShapeError(msg.str());
  }
  // Columns are independent; chunking caps the hidden activations at about
  // 32 MB for very wide networks without changing any result.
  Eigen::Index widest = 1;
  for (const Layer& l : layers_) widest = std::max<Eigen::Index>(widest, l.affine.out_dim());
  const Eigen::Index chunk = std::max<Eigen::Index>(1, (Eigen::Index{1} << 22) / widest);
  Matrix out(output_dim(), points.cols());
  for (Eigen::Index c0 = 0; c0 < points.cols(); c0 += chunk) {
    const Eigen::Index cols = std::min(chunk, points.cols() - c0);
    Matrix z = points.middleCols(c0, cols);
    for (const Layer& l : layers_) {
      Matrix next = l.affine.weights * z;
      next.colwise() += l.affine.bias;
      if (l.activated) apply_in_place(activation_, next);
      z = std::move(next);
    }
    out.middleCols(c0, cols) = z;
  }
  return out;
}

Vector Network::eval_scalar(const Matrix& points) const {
  if (output_dim() != 1) throw ShapeError("eval_scalar on a network with vector output");
  return eval_batch(points).row(0).transpose();
}

Vector eval_network(const Network& net, const Vector& x) { return net.eval(x); }

Network affine_combine(std::span<const Network> nets, std::span<const double> coeffs, double constant) {
  if (nets.empty()) throw DomainError("affine_combine: empty network list");
  if (nets.size() != coeffs.size()) throw ShapeError("affine_combine: coefficient count differs from network count");
  const Network& first = nets.front();
  const int in = first.input_dim();
  const int depth = first.hidden_depth();
  for (const Network& n : nets) {
    if (n.input_dim() != in) throw ShapeError("affine_combine: networks disagree on input_dim");
    if (n.output_dim() != 1) throw ShapeError("affine_combine: networks must have scalar output");
    if (n.hidden_depth() != depth) {
      throw Unsupported("affine_combine: networks of different hidden depth cannot be merged");
    }
    if (depth > 0 && n.activation() != first.activation()) {
      throw UnsupportedActivation("affine_combine: networks use different activations");
    }
    // Unactivated intermediate layers never occur in constructed networks;
    // merging requires layer k to be the k-th hidden layer in every input.
    if (n.layers().size() != first.layers().size()) {
      throw ShapeError("affine_combine: networks have different layer counts");
    }
  }

  const std::size_t layer_count = first.layers().size();
  std::vector<Layer> out;
  out.reserve(layer_count);

  if (layer_count == 1) {
    // Pure affine maps: combine coefficients directly.
    SparseMatrix w(1, in);
    double b = constant;
    for (std::size_t i = 0; i < nets.size(); ++i) {
      w += coeffs[i] * nets[i].layers()[0].affine.weights;
      b += coeffs[i] * nets[i].layers()[0].affine.bias(0);
    }
    Vector bias(1);
    bias(0) = b;
    out.push_back(Layer{AffineLayer(w, bias), false});
    return Network(in, first.activation(), std::move(out));
  }

  for (std::size_t k = 0; k < layer_count; ++k) {
    const bool is_first = k == 0;
    const bool is_output = k + 1 == layer_count;
    int rows = 0;
    int cols = 0;
    for (const Network& n : nets) {
      rows += is_output ? 0 : n.layers()[k].affine.out_dim();
      cols += is_first ? 0 : n.layers()[k].affine.in_dim();
    }
    if (is_output) rows = 1;
    if (is_first) cols = in;

    std::vector<Triplet> trips;
    Vector bias = Vector::Zero(rows);
    int r0 = 0;
    int c0 = 0;
    for (std::size_t i = 0; i < nets.size(); ++i) {
      const AffineLayer& a = nets[i].layers()[k].affine;
      if (is_output) {
        append_block(trips, a.weights, 0, c0, coeffs[i]);
        bias(0) += coeffs[i] * a.bias(0);
      } else {
        append_block(trips, a.weights, r0, is_first ? 0 : c0);
        bias.segment(r0, a.out_dim()) = a.bias;
      }
      r0 += a.out_dim();
      c0 += a.in_dim();
    }
    if (is_output) bias(0) += constant;
    out.push_back(Layer{AffineLayer(from_triplets(rows, cols, trips), bias), first.layers()[k].activated});
  }
  return Network(in, first.activation(), std::move(out));
}

Network precompose_affine(const Network& net, const AffineLayer& map) {
  if (map.out_dim() != net.input_dim()) {
    std::ostringstream msg;
    msg << "precompose_affine: map produces " << map.out_dim() << " values, network expects " << net.input_dim();
    throw ShapeError(msg.str());
  }
  std::vector<Layer> layers = net.layers();
  const AffineLayer& head = layers.front().affine;
  SparseMatrix w = head.weights * map.weights;
  Vector b = head.weights * map.bias + head.bias;
  layers.front().affine = AffineLayer(std::move(w), std::move(b));
  return Network(map.in_dim(), net.activation(), std::move(layers));
}

Network compose_scalar(const Network& outer, const Network& inner) {
  if (outer.input_dim() != 1) throw ShapeError("compose_scalar: outer network must take a scalar input");
  if (inner.output_dim() != 1) throw ShapeError("compose_scalar: inner network must have a scalar output");
  const int depth = outer.hidden_depth() + inner.hidden_depth();
  if (depth > kMaxHiddenDepth) {
    throw DepthBudgetError("compose_scalar: combined depth " + std::to_string(depth) + " exceeds the cap of 2");
  }
  Activation act = inner.hidden_depth() > 0 ? inner.activation() : outer.activation();
  if (outer.hidden_depth() > 0 && inner.hidden_depth() > 0 && outer.activation() != inner.activation()) {
    throw UnsupportedActivation("compose_scalar: networks use different activations");
  }

  std::vector<Layer> layers(inner.layers().begin(), inner.layers().end() - 1);
  const AffineLayer& tail = inner.layers().back().affine;
  const AffineLayer& head = outer.layers().front().affine;
  SparseMatrix w = head.weights * tail.weights;
  Vector b = head.weights * tail.bias + head.bias;
  layers.push_back(Layer{AffineLayer(std::move(w), std::move(b)), outer.layers().front().activated});
  layers.insert(layers.end(), outer.layers().begin() + 1, outer.layers().end());
  return Network(inner.input_dim(), act, std::move(layers));
}

NetworkStats network_stats(const Network& net) {
  NetworkStats s;
  for (const Layer& l : net.layers()) {
    const long long in = l.affine.in_dim();
    const long long out = l.affine.out_dim();
    s.parameter_count += out * in + out;
    if (l.activated) {
      ++s.hidden_depth;
      s.widths.push_back(static_cast<int>(out));
    }
  }
  return s;
}

}  // namespace sepnet
