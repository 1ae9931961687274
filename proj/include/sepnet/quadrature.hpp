#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sepnet/network.hpp"

namespace sepnet {

enum class QuadratureScheme { kTrivial, kCircleGrid, kEulerSO3, kMonteCarloHaar };

// "trivial", "circle", "euler", "mc-haar".
std::string_view scheme_name(QuadratureScheme scheme);
QuadratureScheme parse_scheme(std::string_view name);

// Weighted rotations {(R_i, w_i)} standing in for the Haar probability
// measure on SO(n): sum_i w_i f(R_i) approximates the Haar integral of f.
struct RotationQuadrature {
  int n = 1;
  QuadratureScheme scheme = QuadratureScheme::kTrivial;
  std::uint64_t seed = 0;
  // Node budget the quadrature was built for; euler grids may realize fewer.
  int requested_nodes = 1;
  std::vector<Matrix> rotations;
  std::vector<double> weights;

  int size() const { return static_cast<int>(rotations.size()); }
};

// circle: angles 2 pi k / L, weights 1/L (n = 2).
// euler: Z-Y-Z product grid with midpoint polar angles, weights prop. to
//   sin(beta); the largest grid m*m*k <= L with |2k - m| <= 1 (n = 3).
// mc-haar: QR of Gaussian matrices, sign-fixed, weights 1/L (n >= 2).
// trivial: the 1x1 identity (n = 1).
// Throws ConfigError for an invalid scheme/dimension pairing.
RotationQuadrature build_quadrature(int n, int nodes, QuadratureScheme scheme, std::uint64_t seed = 0);

// Same scheme with at least twice as many nodes; mc-haar derives a fresh seed
// deterministically. trivial is returned unchanged.
RotationQuadrature refine(const RotationQuadrature& q);

// Throws ConstructionError if weights do not sum to 1 within 1e-12, some
// weight is negative, or some node is not in SO(n).
void check_invariants(const RotationQuadrature& q);

// Seed derivation used by refine (splitmix64 step).
std::uint64_t derive_seed(std::uint64_t seed);

QuadratureScheme default_scheme(int n);
// Starting node budget for hole construction: 1, 16, 128 for n = 1, 2, 3.
int default_node_budget(int n);

// Picks scheme and node budget per dimension; unset fields use the defaults.
struct QuadratureConfig {
  std::optional<QuadratureScheme> scheme;
  std::optional<int> nodes;
  std::uint64_t seed = 0;

  RotationQuadrature build(int n) const;
};

}  // namespace sepnet
