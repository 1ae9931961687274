#include "sepnet/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "sepnet/errors.hpp"

namespace sepnet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Matrix rot_z(double a) {
  Matrix r = Matrix::Identity(3, 3);
  r(0, 0) = std::cos(a);
  r(0, 1) = -std::sin(a);
  r(1, 0) = std::sin(a);
  r(1, 1) = std::cos(a);
  return r;
}

Matrix rot_y(double b) {
  Matrix r = Matrix::Identity(3, 3);
  r(0, 0) = std::cos(b);
  r(0, 2) = std::sin(b);
  r(2, 0) = -std::sin(b);
  r(2, 2) = std::cos(b);
  return r;
}

struct EulerGrid {
  int m = 1;  // azimuthal nodes for alpha and gamma
  int k = 1;  // polar nodes for beta
  int size() const { return m * m * k; }
};

// Balanced grids: |2k - m| <= 1, so the polar spacing matches the azimuthal.
std::vector<EulerGrid> balanced_grids(int m) {
  std::vector<EulerGrid> out;
  for (int k = std::max(1, (m - 1) / 2); k <= (m + 1) / 2; ++k) {
    if (std::abs(2 * k - m) <= 1) out.push_back(EulerGrid{m, k});
  }
  return out;
}

EulerGrid euler_grid_at_most(int budget) {
  EulerGrid best;
  for (int m = 1; m * m <= budget; ++m) {
    for (EulerGrid g : balanced_grids(m)) {
      if (g.size() <= budget && g.size() > best.size()) best = g;
    }
  }
  return best;
}

EulerGrid euler_grid_at_least(int target) {
  for (int m = 1;; ++m) {
    for (EulerGrid g : balanced_grids(m)) {
      if (g.size() >= target) return g;
    }
  }
}

void fill_euler(RotationQuadrature& q, EulerGrid g) {
  std::vector<double> sin_beta(static_cast<std::size_t>(g.k));
  double total = 0.0;
  for (int j = 0; j < g.k; ++j) {
    sin_beta[static_cast<std::size_t>(j)] = std::sin((j + 0.5) * std::numbers::pi / g.k);
    total += sin_beta[static_cast<std::size_t>(j)];
  }
  total *= static_cast<double>(g.m) * g.m;
  for (int a = 0; a < g.m; ++a) {
    for (int j = 0; j < g.k; ++j) {
      for (int c = 0; c < g.m; ++c) {
        const double alpha = kTwoPi * a / g.m;
        const double beta = (j + 0.5) * std::numbers::pi / g.k;
        const double gamma = kTwoPi * c / g.m;
        q.rotations.push_back(rot_z(alpha) * rot_y(beta) * rot_z(gamma));
        q.weights.push_back(sin_beta[static_cast<std::size_t>(j)] / total);
      }
    }
  }
}

void fill_haar(RotationQuadrature& q, int nodes) {
  std::mt19937_64 rng(q.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = q.n;
  for (int i = 0; i < nodes; ++i) {
    Matrix g(n, n);
    for (int c = 0; c < n; ++c) {
      for (int r = 0; r < n; ++r) g(r, c) = gauss(rng);
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix qm = qr.householderQ();
    const Matrix rm = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < n; ++c) {
      if (rm(c, c) < 0.0) qm.col(c) *= -1.0;
    }
    if (qm.determinant() < 0.0) qm.col(0) *= -1.0;
    q.rotations.push_back(std::move(qm));
    q.weights.push_back(1.0 / nodes);
  }
}

}  // namespace

std::string_view scheme_name(QuadratureScheme scheme) {
  switch (scheme) {
    case QuadratureScheme::kTrivial:
      return "trivial";
    case QuadratureScheme::kCircleGrid:
      return "circle";
    case QuadratureScheme::kEulerSO3:
      return "euler";
    case QuadratureScheme::kMonteCarloHaar:
      return "mc-haar";
  }
  return "?";
}

QuadratureScheme parse_scheme(std::string_view name) {
  if (name == "trivial") return QuadratureScheme::kTrivial;
  if (name == "circle") return QuadratureScheme::kCircleGrid;
  if (name == "euler") return QuadratureScheme::kEulerSO3;
  if (name == "mc-haar") return QuadratureScheme::kMonteCarloHaar;
  throw ConfigError("unknown quadrature scheme '" + std::string(name) + "' (expected trivial, circle, euler or mc-haar)");
}

std::uint64_t derive_seed(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RotationQuadrature build_quadrature(int n, int nodes, QuadratureScheme scheme, std::uint64_t seed) {
  if (n < 1) throw ConfigError("quadrature dimension must be >= 1");
  if (nodes < 1) throw ConfigError("quadrature node budget must be >= 1");
  const auto mismatch = [&](const char* need) {
    std::ostringstream msg;
    msg << "scheme '" << scheme_name(scheme) << "' requires " << need << ", got n = " << n;
    throw ConfigError(msg.str());
  };

  RotationQuadrature q;
  q.n = n;
  q.scheme = scheme;
  q.seed = seed;
  q.requested_nodes = nodes;
  switch (scheme) {
    case QuadratureScheme::kTrivial:
      if (n != 1) mismatch("n = 1");
      q.rotations.push_back(Matrix::Identity(1, 1));
      q.weights.push_back(1.0);
      break;
    case QuadratureScheme::kCircleGrid:
      if (n != 2) mismatch("n = 2");
      for (int k = 0; k < nodes; ++k) {
        const double a = kTwoPi * k / nodes;
        Matrix r(2, 2);
        r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        q.rotations.push_back(std::move(r));
        q.weights.push_back(1.0 / nodes);
      }
      break;
    case QuadratureScheme::kEulerSO3:
      if (n != 3) mismatch("n = 3");
      fill_euler(q, euler_grid_at_most(nodes));
      break;
    case QuadratureScheme::kMonteCarloHaar:
      if (n < 2) mismatch("n >= 2");
      fill_haar(q, nodes);
      break;
  }
  check_invariants(q);
  return q;
}

RotationQuadrature refine(const RotationQuadrature& q) {
  switch (q.scheme) {
    case QuadratureScheme::kTrivial:
      return q;
    case QuadratureScheme::kCircleGrid:
      return build_quadrature(q.n, 2 * q.size(), q.scheme, q.seed);
    case QuadratureScheme::kEulerSO3: {
      const EulerGrid g = euler_grid_at_least(2 * q.size());
      return build_quadrature(q.n, g.size(), q.scheme, q.seed);
    }
    case QuadratureScheme::kMonteCarloHaar:
      return build_quadrature(q.n, 2 * q.size(), q.scheme, derive_seed(q.seed));
  }
  return q;
}

void check_invariants(const RotationQuadrature& q) {
  if (q.rotations.empty() || q.rotations.size() != q.weights.size()) {
    throw ConstructionError("quadrature has no nodes or mismatched weights");
  }
  if (q.n == 1 && q.size() != 1) throw ConstructionError("SO(1) quadrature must have exactly one node");
  double sum = 0.0;
  for (std::size_t i = 0; i < q.rotations.size(); ++i) {
    const Matrix& r = q.rotations[i];
    if (q.weights[i] < 0.0) throw ConstructionError("negative quadrature weight");
    sum += q.weights[i];
    if (r.rows() != q.n || r.cols() != q.n) throw ConstructionError("quadrature node has wrong shape");
    const double defect = (r.transpose() * r - Matrix::Identity(q.n, q.n)).cwiseAbs().maxCoeff();
    if (!(defect < 1e-10) || !(r.determinant() > 0.0)) {
      std::ostringstream msg;
      msg << "quadrature node " << i << " is not in SO(" << q.n << ") (orthogonality defect " << defect << ")";
      throw ConstructionError(msg.str());
    }
  }
  if (!(std::abs(sum - 1.0) < 1e-12)) throw ConstructionError("quadrature weights do not sum to 1");
}

QuadratureScheme default_scheme(int n) {
  if (n == 1) return QuadratureScheme::kTrivial;
  if (n == 2) return QuadratureScheme::kCircleGrid;
  if (n == 3) return QuadratureScheme::kEulerSO3;
  return QuadratureScheme::kMonteCarloHaar;
}

int default_node_budget(int n) {
  if (n == 1) return 1;
  if (n == 2) return 16;
  if (n == 3) return 128;
  return 256 * (n - 3);
}

RotationQuadrature QuadratureConfig::build(int n) const {
  return build_quadrature(n, nodes.value_or(default_node_budget(n)), scheme.value_or(default_scheme(n)), seed);
}

}  // namespace sepnet
