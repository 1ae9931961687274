#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "sepnet/serialize.hpp"
#include "test_util.hpp"

using namespace sepnet;
using namespace sepnet::testing;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

void expect_identical(const Network& a, const Network& b) {
  ASSERT_EQ(a.input_dim(), b.input_dim());
  ASSERT_EQ(a.activation(), b.activation());
  ASSERT_EQ(a.layers().size(), b.layers().size());
  for (std::size_t l = 0; l < a.layers().size(); ++l) {
    const Layer& x = a.layers()[l];
    const Layer& y = b.layers()[l];
    ASSERT_EQ(x.activated, y.activated);
    const Matrix wx = x.affine.dense_weights();
    const Matrix wy = y.affine.dense_weights();
    ASSERT_EQ(wx.rows(), wy.rows());
    ASSERT_EQ(wx.cols(), wy.cols());
    for (Eigen::Index i = 0; i < wx.size(); ++i) ASSERT_TRUE(bit_equal(wx.data()[i], wy.data()[i]));
    for (Eigen::Index i = 0; i < x.affine.bias.size(); ++i) ASSERT_TRUE(bit_equal(x.affine.bias(i), y.affine.bias(i)));
  }
}

}  // namespace

TEST(Serialize, RoundTripProperty) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 4), width(1, 7), depth(0, 2);
  std::uniform_real_distribution<double> expo(-300, 300);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> hidden;
    for (int l = depth(rng); l > 0; --l) hidden.push_back(width(rng));
    Network net = random_network(rng, dim(rng), hidden, random_activation(rng));
    // Spread magnitudes over the whole binary64 exponent range.
    std::vector<Layer> layers = net.layers();
    Matrix w = layers.front().affine.dense_weights();
    w(0, 0) *= std::pow(10.0, expo(rng));
    layers.front().affine = AffineLayer::dense(w, layers.front().affine.bias);
    net = Network(net.input_dim(), net.activation(), layers);
    const std::string text = serialize(net);
    const Network back = deserialize(text);
    expect_identical(net, back);
    ASSERT_EQ(serialize(back), text);
  }
}

TEST(Serialize, NegativeZeroAndSubnormal) {
  Matrix w(1, 2);
  w << -0.0, 4.9e-324;
  const Network net(2, Activation::kRelu, {Layer{AffineLayer::dense(w, Vector{{-0.0}}), false}});
  const Network back = deserialize(serialize(net));
  EXPECT_TRUE(std::signbit(back.layers()[0].affine.bias(0)));
  EXPECT_TRUE(bit_equal(back.layers()[0].affine.dense_weights()(0, 1), 4.9e-324));
}

TEST(Serialize, SparseFormForLargeLayers) {
  const int rows = 1100, cols = 1000;  // rows * cols > 2^20
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < rows; ++i) t.emplace_back(i, i % cols, 0.5 + i);
  SparseMatrix w(rows, cols);
  w.setFromTriplets(t.begin(), t.end());
  const Network net(cols, Activation::kLogistic,
                    {Layer{AffineLayer(w, Vector::Zero(rows)), true},
                     Layer{AffineLayer::dense(Matrix::Ones(1, rows), Vector::Zero(1)), false}});
  const nlohmann::json doc = network_to_json(net);
  EXPECT_TRUE(doc["layers"][0].contains("weights_sparse"));
  EXPECT_TRUE(doc["layers"][1].contains("weights"));
  expect_identical(net, network_from_json(doc));
}

TEST(Serialize, StreamedTextMatchesDocument) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 200; ++k) {
    const Network net = random_network(rng, 1 + k % 4, {1 + k % 5}, random_activation(rng));
    EXPECT_EQ(serialize(net), network_to_json(net).dump() + "\n");
  }
  const int rows = 1100, cols = 1000;
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < rows; ++i) t.emplace_back(i, (7 * i) % cols, i % 3 ? 1.0 / (i + 1) : -0.0);
  t.emplace_back(3, 5, 4.9e-324);
  SparseMatrix w(rows, cols);
  w.setFromTriplets(t.begin(), t.end());
  const Network net(cols, Activation::kRelu,
                    {Layer{AffineLayer(w, Vector::Constant(rows, -0.0)), true},
                     Layer{AffineLayer::dense(Matrix::Ones(1, rows), Vector::Zero(1)), false}});
  EXPECT_EQ(serialize(net), network_to_json(net).dump() + "\n");
}

TEST(Serialize, Schema) {
  const Network net = Network::constant(3, 1.25, Activation::kTanh);
  const nlohmann::json doc = network_to_json(net);
  EXPECT_EQ(doc["input_dim"], 3);
  EXPECT_EQ(doc["activation"], "tanh");
  EXPECT_EQ(doc["layers"].size(), 1u);
  EXPECT_EQ(doc["layers"][0]["bias"][0], 1.25);
  EXPECT_EQ(doc["layers"][0]["activated"], false);
}

TEST(Serialize, MalformedDocuments) {
  EXPECT_THROW(deserialize("{"), ParseError);
  EXPECT_THROW(deserialize("[]"), ParseError);
  EXPECT_THROW(deserialize(R"({"input_dim": 1, "activation": "relu"})"), ParseError);
  EXPECT_THROW(deserialize(R"({"input_dim": 1, "activation": "gelu", "layers": []})"), ParseError);
  EXPECT_THROW(deserialize(R"({"input_dim": 1, "activation": "relu",
      "layers": [{"weights": [[1, 2]], "bias": [0], "activated": false}]})"),
               ParseError);
  EXPECT_THROW(deserialize(R"({"input_dim": 1, "activation": "relu",
      "layers": [{"weights": [["x"]], "bias": [0], "activated": false}]})"),
               ParseError);
  EXPECT_THROW(deserialize(R"({"input_dim": 1, "activation": "relu",
      "layers": [{"weights_sparse": {"rows": 1, "cols": 1, "entries": [[0, 0, 1], [0, 0, 2]]},
                  "bias": [0], "activated": false}]})"),
               ParseError);
  try {
    deserialize(R"({"input_dim": 1, "activation": "relu", "layers": [{"weights": [[1]], "bias": "no", "activated": false}]})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("layers"), std::string::npos) << e.what();
  }
}

TEST(Serialize, FileRoundTrip) {
  std::mt19937_64 rng(4);
  const Network net = random_network(rng, 2, {3, 2}, Activation::kRelu);
  const auto path = std::filesystem::temp_directory_path() / "sepnet_serialize_test.json";
  save_network(net, path);
  expect_identical(net, load_network(path));
  std::filesystem::remove(path);
  EXPECT_THROW(load_network(path), ParseError);
}
