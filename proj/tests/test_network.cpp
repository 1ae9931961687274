#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sepnet/hole.hpp"
#include "sepnet/network.hpp"
#include "test_util.hpp"

using namespace sepnet;
using namespace sepnet::testing;

namespace {
double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace

TEST(Network, IdentityLayer) {
  const Network net = Network::affine(AffineLayer::identity(2));
  const Vector y = eval_network(net, Vector{{3.0, -2.0}});
  EXPECT_EQ(y, (Vector{{3.0, -2.0}}));
  EXPECT_EQ(net.hidden_depth(), 0);
  EXPECT_EQ(network_stats(net).hidden_depth, 0);
}

TEST(Network, SingleSigmoidUnit) {
  const Network net(1, Activation::kLogistic,
                    {Layer{AffineLayer::dense(Matrix::Ones(1, 1), Vector::Zero(1)), true},
                     Layer{AffineLayer::dense(Matrix::Ones(1, 1), Vector::Zero(1)), false}});
  EXPECT_EQ(eval_network(net, Vector::Zero(1))(0), 0.5);
}

TEST(Network, PsiHandValue) {
  const double c = 9.19024;
  const Network psi = build_psi(Activation::kLogistic, 1.0, c);
  const double expect = logistic(0.0) + logistic(-3.0 * c);
  EXPECT_NEAR(psi.eval(Vector::Constant(1, 1.5))(0), expect, 1e-15);
  EXPECT_NEAR(expect - 0.5, 1.05e-12, 0.1e-12);
}

TEST(Network, Validation) {
  EXPECT_THROW(Network(2, Activation::kRelu, {Layer{AffineLayer::dense(Matrix::Ones(1, 3), Vector::Zero(1)), false}}),
               ShapeError);
  EXPECT_THROW(Network(1, Activation::kRelu, {Layer{AffineLayer::dense(Matrix::Ones(1, 1), Vector::Zero(1)), true}}),
               ShapeError);
  Matrix bad = Matrix::Ones(1, 1);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(Network(1, Activation::kRelu, {Layer{AffineLayer::dense(bad, Vector::Zero(1)), false}}), DomainError);
  std::mt19937_64 rng(1);
  EXPECT_THROW(random_network(rng, 2, {3, 3, 3}, Activation::kRelu), DepthBudgetError);
  const Network net = random_network(rng, 2, {3}, Activation::kRelu);
  EXPECT_THROW(net.eval(Vector::Zero(3)), ShapeError);
}

TEST(Network, AffineCombineExamples) {
  std::mt19937_64 rng(11);
  const Network a = random_network(rng, 3, {5, 4}, Activation::kTanh);
  const double one[] = {1.0};
  const Network same = affine_combine(std::span<const Network>(&a, 1), one, 0.0);
  const PointCloud pts = random_cloud(rng, 3, 100, -2, 2);
  EXPECT_LT((same.eval_scalar(pts.coords()) - a.eval_scalar(pts.coords())).cwiseAbs().maxCoeff(), 1e-12);

  const Network psi = build_psi(Activation::kLogistic, 1.0, 9.19024);
  const std::vector<Network> two{psi, psi};
  const std::vector<double> ones{1.0, 1.0};
  const Network doubled = affine_combine(two, ones, 0.0);
  const double psi0 = 2.0 * logistic(-1.5 * 9.19024);
  EXPECT_NEAR(doubled.eval(Vector::Zero(1))(0), 2.0 * psi0, 1e-15);
  EXPECT_EQ(network_stats(doubled).widths, (std::vector<int>{4}));
}

TEST(Network, AffineCombineErrors) {
  std::mt19937_64 rng(5);
  const std::vector<Network> mixed{random_network(rng, 2, {3}, Activation::kRelu),
                                   random_network(rng, 2, {3, 2}, Activation::kRelu)};
  const std::vector<double> c{1.0, 1.0};
  EXPECT_THROW(affine_combine(mixed, c, 0.0), Unsupported);
  EXPECT_THROW(affine_combine(std::span<const Network>(), std::span<const double>(), 0.0), DomainError);
  const std::vector<Network> acts{random_network(rng, 2, {3}, Activation::kRelu),
                                  random_network(rng, 2, {3}, Activation::kTanh)};
  EXPECT_THROW(affine_combine(acts, c, 0.0), Error);
}

TEST(Network, PrecomposeIdentity) {
  std::mt19937_64 rng(2);
  const Network net = random_network(rng, 3, {6}, Activation::kLogistic);
  const Network same = precompose_affine(net, AffineLayer::identity(3));
  const PointCloud pts = random_cloud(rng, 3, 100, -3, 3);
  EXPECT_LT((same.eval_scalar(pts.coords()) - net.eval_scalar(pts.coords())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Network, ComposeScalarExamples) {
  std::mt19937_64 rng(9);
  // Identity outer: extensional equality with inner.
  const Network inner = random_network(rng, 2, {4}, Activation::kLogistic);
  const Network id = Network::affine(AffineLayer::identity(1), Activation::kLogistic);
  const Network same = compose_scalar(id, inner);
  const PointCloud pts = random_cloud(rng, 2, 100, -2, 2);
  EXPECT_LT((same.eval_scalar(pts.coords()) - inner.eval_scalar(pts.coords())).cwiseAbs().maxCoeff(), 1e-12);

  // phi_{1/3,3,2/3} over a relu hole: depth 2, and zero where the hole is zero.
  const RotationQuadrature q = build_quadrature(2, 8, QuadratureScheme::kCircleGrid);
  const Vector p{{0.5, -0.5}};
  const Hole hole = build_hole_relu(2, p, 1.0, 0.3, q);
  const Network phi = build_phi(1.0 / 3.0, 3.0, 2.0 / 3.0);
  const Network composed = compose_scalar(phi, hole.h);
  EXPECT_EQ(composed.hidden_depth(), 2);
  EXPECT_EQ(hole.h.eval(p)(0), 0.0);
  EXPECT_EQ(composed.eval(p)(0), 0.0);

  // Sigmoid outer unit sigma(s + t y) over a sigmoid hole.
  const Hole sh = build_hole_sigmoid(Activation::kLogistic, 2, p, 1.0, 0.2, q);
  const double s = -6.5917, t = 13.1833;
  const Network outer(1, Activation::kLogistic,
                      {Layer{AffineLayer::dense(Matrix::Constant(1, 1, t), Vector::Constant(1, s)), true},
                       Layer{AffineLayer::dense(Matrix::Ones(1, 1), Vector::Zero(1)), false}});
  const Network term = compose_scalar(outer, sh.h);
  for (int j = 0; j < pts.size(); ++j) {
    const double h = sh.h.eval(pts.point(j))(0);
    EXPECT_NEAR(term.eval(pts.point(j))(0), logistic(s + t * h), 1e-12);
  }
  EXPECT_THROW(compose_scalar(phi, composed), DepthBudgetError);
}

TEST(Network, StatsWidthAccounting) {
  // Three separator-like terms, each over a hole of first-layer width 2nL
  // with n = 2, L = 8: widths [96, 3].
  const RotationQuadrature q = build_quadrature(2, 8, QuadratureScheme::kCircleGrid);
  const Network outer(1, Activation::kLogistic,
                      {Layer{AffineLayer::dense(Matrix::Ones(1, 1), Vector::Zero(1)), true},
                       Layer{AffineLayer::dense(Matrix::Ones(1, 1), Vector::Zero(1)), false}});
  std::vector<Network> terms;
  for (int i = 0; i < 3; ++i) {
    const Hole h = build_hole_sigmoid(Activation::kLogistic, 2, Vector{{3.0 * i, 0.0}}, 1.0, 0.3, q);
    EXPECT_EQ(h.h.layers().front().affine.out_dim(), 2 * 2 * 8);
    terms.push_back(compose_scalar(outer, h.h));
  }
  const std::vector<double> c(3, 1.0 / 3.0);
  const NetworkStats st = network_stats(affine_combine(terms, c, 0.0));
  EXPECT_EQ(st.hidden_depth, 2);
  EXPECT_EQ(st.widths, (std::vector<int>{96, 3}));
  EXPECT_EQ(st.parameter_count, 96 * 2 + 96 + 3 * 96 + 3 + 1 * 3 + 1);
}

// Extensional laws on random networks and points.
TEST(NetworkProperty, AffineCombineHomomorphism) {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> dim(1, 4), width(1, 6), count(1, 4), depth(0, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = dim(rng);
    const int d = depth(rng);
    const Activation act = random_activation(rng);
    std::vector<Network> nets;
    std::vector<double> coeffs;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) {
      std::vector<int> hidden;
      for (int l = 0; l < d; ++l) hidden.push_back(width(rng));
      nets.push_back(random_network(rng, n, hidden, act));
      coeffs.push_back(random_vector(rng, 1, 2.0)(0));
    }
    const double c0 = random_vector(rng, 1, 2.0)(0);
    const Network sum = affine_combine(nets, coeffs, c0);
    ASSERT_EQ(sum.hidden_depth(), d);
    const PointCloud pts = random_cloud(rng, n, 5, -3, 3);
    Vector expect = Vector::Constant(pts.size(), c0);
    for (int i = 0; i < k; ++i) expect += coeffs[static_cast<std::size_t>(i)] * nets[static_cast<std::size_t>(i)].eval_scalar(pts.coords());
    ASSERT_LT((sum.eval_scalar(pts.coords()) - expect).cwiseAbs().maxCoeff(), 1e-9) << "trial " << trial;
  }
}

TEST(NetworkProperty, PrecomposeLaw) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dim(1, 4), width(1, 6), depth(0, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = dim(rng), n = dim(rng);
    std::vector<int> hidden;
    for (int l = depth(rng); l > 0; --l) hidden.push_back(width(rng));
    const Network net = random_network(rng, n, hidden, random_activation(rng));
    const AffineLayer map = AffineLayer::dense(random_matrix(rng, n, m), random_vector(rng, n));
    const Network pre = precompose_affine(net, map);
    ASSERT_EQ(pre.input_dim(), m);
    const PointCloud pts = random_cloud(rng, m, 5, -3, 3);
    const Matrix mapped = (map.dense_weights() * pts.coords()).colwise() + map.bias;
    ASSERT_LT((pre.eval_batch(pts.coords()) - net.eval_batch(mapped)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(NetworkProperty, ComposeScalarLaw) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> dim(1, 4), width(1, 6), depth(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const Activation act = random_activation(rng);
    const int n = dim(rng);
    std::vector<int> hi, ho;
    for (int l = depth(rng); l > 0; --l) hi.push_back(width(rng));
    for (int l = depth(rng); l > 0; --l) ho.push_back(width(rng));
    const Network inner = random_network(rng, n, hi, act);
    const Network outer = random_network(rng, 1, ho, act);
    const Network comp = compose_scalar(outer, inner);
    ASSERT_EQ(comp.hidden_depth(), inner.hidden_depth() + outer.hidden_depth());
    const PointCloud pts = random_cloud(rng, n, 5, -3, 3);
    const Vector mid = inner.eval_scalar(pts.coords());
    const Vector expect = outer.eval_scalar(mid.transpose());
    ASSERT_LT((comp.eval_scalar(pts.coords()) - expect).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(NetworkProperty, DepthCap) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const Activation act = random_activation(rng);
    const Network a = random_network(rng, 2, {2, 2}, act);
    const Network b = random_network(rng, 1, {2}, act);
    ASSERT_THROW(compose_scalar(b, a), DepthBudgetError);
    ASSERT_THROW(random_network(rng, 2, {1, 1, 1}, act), DepthBudgetError);
  }
}
