#pragma once

#include <optional>

#include "sepnet/activation.hpp"
#include "sepnet/errors.hpp"
#include "sepnet/network.hpp"
#include "sepnet/point_cloud.hpp"
#include "sepnet/quadrature.hpp"

namespace sepnet {

// Parameters of a hole function around `center`.
struct HoleParams {
  Vector center;
  double dist = 0.0;   // distance from the center to the far set
  double delta = 0.0;  // inner radius, 0 < delta < dist / 2
  double eps = 0.0;
  int n_const = 1;     // separation constant N (sigmoid only)
  double slope = 0.0;  // c: sigmoid tail slope, or 1 / delta for relu
  RotationQuadrature quadrature;
};

// Empirical margins of a hole on its verification samples.
struct HoleCertificate {
  double min_on_far = 0.0;
  double max_on_near = 0.0;
  double range_lo = 0.0;
  double range_hi = 0.0;
  bool verified = false;
  int rounds = 0;  // adaptive rounds used before success (or exhaustion)
};

struct Hole {
  // h: near 0 (relu: exactly 0) on B_delta(center), above 1 - eps outside
  // B_dist(center). Hidden depth 1.
  Network h;
  // The rotation-averaged coordinate sum before shifting and normalizing
  // (Psi~ or Phi~), centered at the origin. Nodes are R_k R0 for a fixed
  // generic rotation R0 when n is 2 or 3.
  Network averaged;
  HoleParams params;
  HoleCertificate certificate;
};

struct HoleOptions {
  // Extra attempts after the first: shrink delta once, then alternate
  // quadrature refinement and shrinking delta. A shrink divides delta by 2,
  // or by up to 1024 when the far-side deficit exceeds eps by more.
  int retry_rounds = 8;
  // Multiplier on the size of the near grid and sphere samples.
  int density = 1;
};

// Raised when no (delta, quadrature) in the schedule verifies. Carries the
// certificate with the best margin.
class HoleConstructionError : public ConstructionError {
 public:
  HoleConstructionError(const std::string& what, HoleCertificate best, HoleParams params)
      : ConstructionError(what), best_(std::move(best)), params_(std::move(params)) {}
  const HoleCertificate& best() const { return best_; }
  const HoleParams& params() const { return params_; }

 private:
  HoleCertificate best_;
  HoleParams params_;
};

// Smallest N >= 1 with (1 - eps/N) / (1 + eps/(2nN)) > 1 - eps.
int choose_N(double eps, int n);

// psi(x) = sigma(c (x - 3 delta / 2)) + sigma(c (-x - 3 delta / 2)); width 2.
Network build_psi(Activation act, double delta, double c);

// phi_{b,c,b'}(x) = tau(c(x-b)) + tau(c(-x-b)) - tau(c(x-b')) - tau(c(-x-b'));
// zero on [-b, b], plateau c (b' - b) beyond b'. Width 4.
Network build_phi(double b, double c, double b_prime);

// x -> sum_i f(x_i) for a scalar network f.
Network coordinate_sum(const Network& f, int n);

// x -> sum_k w_k g(R_k x).
Network rotation_average(const Network& g, const RotationQuadrature& quad);

// Near set: grid points of the cube of radius delta around p that lie
// strictly inside B_delta(p). Density 1 is the coarsest grid with at least
// 6^n points; density d refines it to at least d times as many.
PointCloud near_samples(const Vector& p, double delta, int density = 1);

// Quasi-uniform samples of the sphere S_radius(p): two points for n = 1,
// 64 * density equally spaced angles for n = 2, a Fibonacci sphere of
// 128 * density points for n = 3, normalized Gaussians beyond. Angles carry
// an irrational phase so grid rotations never map a sample onto an axis.
PointCloud sphere_samples(const Vector& p, double radius, int density = 1);

// Sigmoid hole: h(x) = Psi~(x - p) / (n (1 + eps / (2nN))). eps in (0, 1/2).
// `far_cloud`, when given, joins the sphere samples in verification.
Hole build_hole_sigmoid(Activation act, int n, const Vector& p, double dist, double eps,
                        const RotationQuadrature& quad, const PointCloud* far_cloud = nullptr,
                        const HoleOptions& options = {});

// ReLU hole: h(x) = Phi~(x - p) / n with Phi built from phi_{delta, 1/delta, 2 delta}.
// eps in (0, 1). The near side is certified as exactly 0. The upper range
// bound allows 1e-12, or the output layer's rounding floor when delta is tiny.
Hole build_hole_relu(int n, const Vector& p, double dist, double eps, const RotationQuadrature& quad,
                     const PointCloud* far_cloud = nullptr, const HoleOptions& options = {});

// Re-evaluates a hole on freshly generated samples at the given density.
HoleCertificate verify_hole(const Hole& hole, const PointCloud* far_cloud, int density);

}  // namespace sepnet
