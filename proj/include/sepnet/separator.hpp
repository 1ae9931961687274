#pragma once

#include <vector>

#include "sepnet/hole.hpp"

namespace sepnet {

// Constants (a, b) with H >= a on A and H <= b on B, plus the empirical
// margins that back them.
struct SeparatorCertificate {
  double a = 0.0;
  double b = 0.0;
  double eps_used = 0.0;
  int n_cover = 0;
  std::vector<Vector> cover_centers;
  double max_on_B = 0.0;
  double min_on_A = 0.0;
  bool verified = false;
};

struct CoverEntry {
  Vector center;
  Hole hole;
};

struct SeparatorOptions {
  HoleOptions hole;
  // A cover hole must stay below this on its own neighbourhood and above
  // 1 - threshold on A.
  double threshold = 1.0 / 3.0;
  // Pick the uncovered B point farthest from A first instead of the first in
  // input order.
  bool farthest_first = false;
};

struct Separator {
  Network H;
  SeparatorCertificate certificate;
  std::vector<CoverEntry> cover;
  double threshold = 1.0 / 3.0;
};

// Greedy finite subcover of B by hole neighbourhoods {q : h_p(q) < threshold}.
// Throws PreconditionError when A and B are empty, of different dimension or
// not disjoint; hole failures propagate as HoleConstructionError naming the
// offending center.
std::vector<CoverEntry> greedy_cover(const PointCloud& B, const PointCloud& A, Activation act,
                                     const QuadratureConfig& quad, const SeparatorOptions& options = {});

// H = (1/N) sum_i sigma(s + t h_i) with eps' = min(eps, 1 / (2 (N + 1))):
// H > 1 - eps' on A, H < eps'/N + 1 - 1/N on B. eps in (0, 1/2).
Separator separate_sets_sigmoid(const PointCloud& A, const PointCloud& B, Activation act, double eps,
                                const QuadratureConfig& quad, const SeparatorOptions& options = {});

// H = (1/N) sum_i phi_{1/3,3,2/3}(h_i): H = 1 on A, H <= 1 - 1/N on B.
Separator separate_sets_relu(const PointCloud& A, const PointCloud& B, const QuadratureConfig& quad,
                             const SeparatorOptions& options = {});

// Dispatches on the activation; eps is ignored for relu.
Separator separate_sets(const PointCloud& A, const PointCloud& B, Activation act, double eps,
                        const QuadratureConfig& quad, const SeparatorOptions& options = {});

// Re-checks every cover hole on samples `density` times denser, cover
// completeness, and the certified bounds of H on both clouds.
SeparatorCertificate reverify_separator(const Separator& sep, const PointCloud& A, const PointCloud& B, int density);

// s, t with s + t/3 = sigma^-1(eps) and s + 2t/3 = sigma^-1(1 - eps).
struct OuterUnit {
  double s = 0.0;
  double t = 0.0;
};
OuterUnit outer_unit_coefficients(Activation act, double eps);

}  // namespace sepnet
