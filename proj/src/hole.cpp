#include "sepnet/hole.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

namespace sepnet {

namespace {

// Irrational angular offset. Grid quadratures contain the identity and the
// rational multiples of pi, which map axis-aligned or diagonal offsets
// exactly onto a coordinate axis; a far point there keeps a fixed deficit
// no matter how small delta gets.
constexpr double kPhase = 0.6180339887498949;

// Nodes R_k R0 for a fixed generic rotation R0. The Haar average is right
// invariant, so the weights carry over unchanged.
RotationQuadrature tilted(const RotationQuadrature& quad) {
  Matrix r0;
  if (quad.n == 2) {
    r0 = Eigen::Rotation2Dd(kPhase).toRotationMatrix();
  } else if (quad.n == 3) {
    r0 = Eigen::AngleAxisd(kPhase, Eigen::Vector3d(1.0, std::sqrt(2.0), std::sqrt(3.0)).normalized())
             .toRotationMatrix();
  } else {
    return quad;
  }
  RotationQuadrature out = quad;
  for (Matrix& r : out.rotations) r = r * r0;
  return out;
}

Network scalar_layer_net(Activation act, const Vector& w_in, const Vector& b_in, const Vector& w_out) {
  Matrix w1 = w_in;
  Matrix w2 = w_out.transpose();
  return Network(1, act,
                 {Layer{AffineLayer::dense(w1, b_in), true},
                  Layer{AffineLayer::dense(w2, Vector::Zero(1)), false}});
}

bool is_relu_hole(const Hole& hole) { return hole.h.activation() == Activation::kRelu; }

double margin(const HoleCertificate& c, double eps) {
  return std::min(eps - c.max_on_near, c.min_on_far - (1.0 - eps));
}

// Largest sum_k |W2_k| a_k(x) over the samples: the magnitude the output
// layer cancels down to h(x), which sets its rounding floor.
double output_condition(const Network& h, const Matrix& x) {
  const AffineLayer& first = h.layers().front().affine;
  const AffineLayer& last = h.layers().back().affine;
  const Matrix a = ((first.weights * x).colwise() + first.bias).cwiseMax(0.0);
  const SparseMatrix w = last.weights.cwiseAbs();
  return (w * a).maxCoeff() + std::abs(last.bias(0));
}

HoleCertificate evaluate(const Network& h, bool relu, const Vector& p, double delta, double dist, double eps,
                         const PointCloud* far_cloud, int density) {
  const PointCloud near = near_samples(p, delta, density);
  PointCloud far = sphere_samples(p, dist, density);
  if (far_cloud != nullptr && !far_cloud->empty()) far = far.concat(*far_cloud);
  const Vector near_vals = h.eval_scalar(near.coords());
  const Vector far_vals = h.eval_scalar(far.coords());

  HoleCertificate cert;
  cert.max_on_near = near_vals.maxCoeff();
  cert.min_on_far = far_vals.minCoeff();
  cert.range_lo = std::min(near_vals.minCoeff(), cert.min_on_far);
  cert.range_hi = std::max(cert.max_on_near, far_vals.maxCoeff());
  const bool far_ok = cert.min_on_far > 1.0 - eps;
  if (relu) {
    const double kappa = std::max(output_condition(h, near.coords()), output_condition(h, far.coords()));
    const double slack = std::max(1e-12, 16.0 * std::numeric_limits<double>::epsilon() * kappa);
    cert.verified = cert.max_on_near == 0.0 && far_ok && cert.range_lo >= 0.0 && cert.range_hi <= 1.0 + slack;
  } else {
    cert.verified = cert.max_on_near < eps && far_ok && cert.range_lo > 0.0 && cert.range_hi < 1.0;
  }
  return cert;
}

// The far-side deficit 1 - min_far shrinks roughly in proportion to delta,
// so a large miss asks for more than one halving.
double shrink_factor(const HoleCertificate& last, double eps) {
  const double deficit = 1.0 - last.min_on_far;
  if (!(deficit > eps)) return 2.0;
  return std::clamp(2.0 * deficit / eps, 2.0, 1024.0);
}

struct Candidate {
  Network h;
  Network averaged;
  HoleParams params;
};

Candidate sigmoid_candidate(Activation act, int n, const Vector& p, double dist, double eps, double delta,
                            const RotationQuadrature& quad) {
  HoleParams params;
  params.center = p;
  params.dist = dist;
  params.delta = delta;
  params.eps = eps;
  params.n_const = choose_N(eps, n);
  const double big_n = params.n_const;
  params.slope = solve_tail_slope(act, delta, eps / (2.0 * n * big_n), eps / (3.0 * big_n));
  params.quadrature = quad;

  Network averaged = rotation_average(coordinate_sum(build_psi(act, delta, params.slope), n), tilted(quad));
  const double scale = 1.0 / (n * (1.0 + eps / (2.0 * n * big_n)));
  Network shifted = precompose_affine(averaged, AffineLayer::translation(-p));
  const double coeff[] = {scale};
  Network h = affine_combine(std::span<const Network>(&shifted, 1), coeff, 0.0);
  return Candidate{std::move(h), std::move(averaged), std::move(params)};
}

Candidate relu_candidate(int n, const Vector& p, double dist, double eps, double delta, const RotationQuadrature& quad) {
  HoleParams params;
  params.center = p;
  params.dist = dist;
  params.delta = delta;
  params.eps = eps;
  params.n_const = 1;
  params.slope = 1.0 / delta;
  params.quadrature = quad;

  Network averaged = rotation_average(coordinate_sum(build_phi(delta, 1.0 / delta, 2.0 * delta), n), tilted(quad));
  Network shifted = precompose_affine(averaged, AffineLayer::translation(-p));
  const double coeff[] = {1.0 / n};
  Network h = affine_combine(std::span<const Network>(&shifted, 1), coeff, 0.0);
  return Candidate{std::move(h), std::move(averaged), std::move(params)};
}

template <typename Build>
Hole adaptive_build(Build build, bool relu, int n, const Vector& p, double dist, double eps,
                    const RotationQuadrature& quad, const PointCloud* far_cloud, const HoleOptions& options) {
  if (p.size() != n) throw ShapeError("hole center has the wrong dimension");
  if (!(dist > 0.0) || !std::isfinite(dist)) throw DomainError("hole: dist must be positive");
  if (quad.n != n) throw ShapeError("hole: quadrature dimension differs from n");
  if (options.retry_rounds < 0 || options.density < 1) throw ConfigError("hole: invalid options");

  double delta = dist / 4.0;
  RotationQuadrature q = quad;
  std::optional<HoleCertificate> best;
  std::optional<HoleCertificate> last;
  HoleParams best_params;
  for (int round = 0; round <= options.retry_rounds; ++round) {
    if (round == 1 || (round >= 2 && (round % 2 == 1 || q.scheme == QuadratureScheme::kTrivial))) {
      delta /= shrink_factor(*last, eps);
    } else if (round >= 2) {
      q = refine(q);
    }
    Candidate cand = build(delta, q);
    HoleCertificate cert = evaluate(cand.h, relu, p, delta, dist, eps, far_cloud, options.density);
    cert.rounds = round;
    if (cert.verified) return Hole{std::move(cand.h), std::move(cand.averaged), std::move(cand.params), cert};
    last = cert;
    if (!best || margin(cert, eps) > margin(*best, eps)) {
      best = cert;
      best_params = cand.params;
    }
  }
  std::ostringstream msg;
  msg << "hole around (" << p.transpose() << ") with dist " << dist << " and eps " << eps << " did not verify after "
      << options.retry_rounds + 1 << " attempts (best: max near " << best->max_on_near << ", min far "
      << best->min_on_far << ")";
  throw HoleConstructionError(msg.str(), *best, best_params);
}

}  // namespace

int choose_N(double eps, int n) {
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("choose_N: eps must lie in (0, 1/2)");
  if (n < 1) throw DomainError("choose_N: n must be positive");
  const auto holds = [&](int big_n) {
    return (1.0 - eps / big_n) / (1.0 + eps / (2.0 * n * big_n)) > 1.0 - eps;
  };
  // The inequality rearranges to N > 1 + (1 - eps) / (2n); start there and
  // settle rounding at the boundary by direct evaluation.
  int big_n = std::max(1, static_cast<int>(std::floor(1.0 + (1.0 - eps) / (2.0 * n))));
  while (big_n > 1 && holds(big_n - 1)) --big_n;
  while (!holds(big_n)) ++big_n;
  return big_n;
}

Network build_psi(Activation act, double delta, double c) {
  if (!is_sigmoidal(act)) throw UnsupportedActivation("build_psi needs a sigmoidal activation");
  if (!(delta > 0.0) || !(c > 0.0)) throw DomainError("build_psi: delta and c must be positive");
  const double shift = -c * 1.5 * delta;
  return scalar_layer_net(act, Vector{{c, -c}}, Vector{{shift, shift}}, Vector{{1.0, 1.0}});
}

Network build_phi(double b, double c, double b_prime) {
  if (!(b > 0.0) || !(c > 0.0)) throw DomainError("build_phi: b and c must be positive");
  if (!(b_prime > b)) throw DomainError("build_phi: b_prime must exceed b");
  return scalar_layer_net(Activation::kRelu, Vector{{c, -c, c, -c}},
                          Vector{{-c * b, -c * b, -c * b_prime, -c * b_prime}}, Vector{{1.0, 1.0, -1.0, -1.0}});
}

Network coordinate_sum(const Network& f, int n) {
  if (f.input_dim() != 1) throw ShapeError("coordinate_sum: f must take a scalar input");
  std::vector<Network> parts;
  parts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Matrix proj = Matrix::Zero(1, n);
    proj(0, i) = 1.0;
    parts.push_back(precompose_affine(f, AffineLayer::dense(proj, Vector::Zero(1))));
  }
  const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  return affine_combine(parts, ones, 0.0);
}

Network rotation_average(const Network& g, const RotationQuadrature& quad) {
  if (g.input_dim() != quad.n) throw ShapeError("rotation_average: dimension mismatch");
  std::vector<Network> parts;
  parts.reserve(quad.rotations.size());
  for (const Matrix& r : quad.rotations) {
    parts.push_back(precompose_affine(g, AffineLayer::dense(r, Vector::Zero(quad.n))));
  }
  return affine_combine(parts, quad.weights, 0.0);
}

PointCloud near_samples(const Vector& p, double delta, int density) {
  const int n = static_cast<int>(p.size());
  const double inside = delta * (1.0 - 1e-9);
  const auto grid = [&](int half) {
    const int per_axis = 2 * half + 1;
    std::vector<Vector> pts;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
      Vector off(n);
      for (int d = 0; d < n; ++d) off(d) = delta * (idx[static_cast<std::size_t>(d)] - half) / half;
      if (off.norm() < inside) pts.push_back(p + off);
      int d = 0;
      while (d < n && ++idx[static_cast<std::size_t>(d)] == per_axis) idx[static_cast<std::size_t>(d++)] = 0;
      if (d == n) break;
    }
    return pts;
  };
  int half = 3;
  std::vector<Vector> pts = grid(half);
  while (static_cast<double>(pts.size()) < std::pow(6.0, n)) pts = grid(++half);
  const double need = static_cast<double>(pts.size()) * density;
  while (static_cast<double>(pts.size()) < need) pts = grid(++half);
  return PointCloud::from_points(pts);
}

PointCloud sphere_samples(const Vector& p, double radius, int density) {
  const int n = static_cast<int>(p.size());
  std::vector<Vector> pts;
  if (n == 1) {
    pts.push_back(p + Vector::Constant(1, radius));
    pts.push_back(p - Vector::Constant(1, radius));
  } else if (n == 2) {
    const int m = 64 * density;
    for (int k = 0; k < m; ++k) {
      const double a = 2.0 * std::numbers::pi * (k + kPhase) / m;
      pts.push_back(p + radius * Vector{{std::cos(a), std::sin(a)}});
    }
  } else if (n == 3) {
    const int m = 128 * density;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < m; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / m;
      const double r = std::sqrt(1.0 - z * z);
      const double a = golden * k + kPhase;
      pts.push_back(p + radius * Vector{{r * std::cos(a), r * std::sin(a), z}});
    }
  } else {
    const int m = 64 * n * density;
    std::mt19937_64 rng(0x5eed5eedULL + static_cast<std::uint64_t>(density));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < m; ++k) {
      Vector v(n);
      for (int d = 0; d < n; ++d) v(d) = gauss(rng);
      pts.push_back(p + radius * v / v.norm());
    }
  }
  return PointCloud::from_points(pts);
}

Hole build_hole_sigmoid(Activation act, int n, const Vector& p, double dist, double eps,
                        const RotationQuadrature& quad, const PointCloud* far_cloud, const HoleOptions& options) {
  if (!is_sigmoidal(act)) throw UnsupportedActivation("build_hole_sigmoid needs a sigmoidal activation");
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("build_hole_sigmoid: eps must lie in (0, 1/2)");
  auto build = [&](double delta, const RotationQuadrature& q) {
    return sigmoid_candidate(act, n, p, dist, eps, delta, q);
  };
  return adaptive_build(build, false, n, p, dist, eps, quad, far_cloud, options);
}

Hole build_hole_relu(int n, const Vector& p, double dist, double eps, const RotationQuadrature& quad,
                     const PointCloud* far_cloud, const HoleOptions& options) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("build_hole_relu: eps must lie in (0, 1)");
  auto build = [&](double delta, const RotationQuadrature& q) { return relu_candidate(n, p, dist, eps, delta, q); };
  return adaptive_build(build, true, n, p, dist, eps, quad, far_cloud, options);
}

HoleCertificate verify_hole(const Hole& hole, const PointCloud* far_cloud, int density) {
  const HoleParams& hp = hole.params;
  HoleCertificate cert = evaluate(hole.h, is_relu_hole(hole), hp.center, hp.delta, hp.dist, hp.eps, far_cloud, density);
  cert.rounds = hole.certificate.rounds;
  return cert;
}

}  // namespace sepnet
