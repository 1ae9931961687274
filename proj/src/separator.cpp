#include "sepnet/separator.hpp"

#include <algorithm>
#include <sstream>

namespace sepnet {

namespace {

void check_clouds(const PointCloud& A, const PointCloud& B) {
  if (A.empty() || B.empty()) throw PreconditionError("separation needs two nonempty clouds");
  if (A.dim() != B.dim()) throw PreconditionError("clouds have different dimensions");
  if (!(cloud_distance(B, A) > 0.0)) throw PreconditionError("clouds are not disjoint (distance 0)");
}

Hole cover_hole(Activation act, const Vector& p, double dist, double eps, const QuadratureConfig& quad,
                const PointCloud& A, const HoleOptions& options) {
  const int n = static_cast<int>(p.size());
  const RotationQuadrature q = quad.build(n);
  if (act == Activation::kRelu) return build_hole_relu(n, p, dist, eps, q, &A, options);
  return build_hole_sigmoid(act, n, p, dist, eps, q, &A, options);
}

Separator finish(const PointCloud& A, const PointCloud& B, Network H, std::vector<CoverEntry> cover, double a,
                 double b, double eps_used, double threshold) {
  Separator sep{std::move(H), {}, std::move(cover), threshold};
  SeparatorCertificate& cert = sep.certificate;
  cert.a = a;
  cert.b = b;
  cert.eps_used = eps_used;
  cert.n_cover = static_cast<int>(sep.cover.size());
  for (const CoverEntry& e : sep.cover) cert.cover_centers.push_back(e.center);
  cert.min_on_A = sep.H.eval_scalar(A.coords()).minCoeff();
  cert.max_on_B = sep.H.eval_scalar(B.coords()).maxCoeff();
  cert.verified = a > b && cert.max_on_B < b + 1e-12 && cert.min_on_A > a - 1e-12;
  return sep;
}

}  // namespace

std::vector<CoverEntry> greedy_cover(const PointCloud& B, const PointCloud& A, Activation act,
                                     const QuadratureConfig& quad, const SeparatorOptions& options) {
  check_clouds(A, B);
  std::vector<bool> covered(static_cast<std::size_t>(B.size()), false);
  std::vector<double> dist_to_A(static_cast<std::size_t>(B.size()));
  for (int i = 0; i < B.size(); ++i) dist_to_A[static_cast<std::size_t>(i)] = distance_to_cloud(B.point(i), A);

  std::vector<CoverEntry> cover;
  while (true) {
    int pick = -1;
    for (int i = 0; i < B.size(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (covered[k]) continue;
      if (pick < 0) {
        pick = i;
        if (!options.farthest_first) break;
      } else if (dist_to_A[k] > dist_to_A[static_cast<std::size_t>(pick)]) {
        pick = i;
      }
    }
    if (pick < 0) break;

    const Vector p = B.point(pick);
    Hole hole = [&] {
      try {
        return cover_hole(act, p, dist_to_A[static_cast<std::size_t>(pick)], options.threshold, quad, A, options.hole);
      } catch (const HoleConstructionError& e) {
        std::ostringstream msg;
        msg << "cover center #" << cover.size() << " (B sample " << pick << "): " << e.what();
        throw HoleConstructionError(msg.str(), e.best(), e.params());
      }
    }();

    const Vector vals = hole.h.eval_scalar(B.coords());
    if (!(vals(pick) < options.threshold)) {
      throw ConstructionError("cover hole does not cover its own center; verification is inconsistent");
    }
    for (int i = 0; i < B.size(); ++i) {
      if (vals(i) < options.threshold) covered[static_cast<std::size_t>(i)] = true;
    }
    cover.push_back(CoverEntry{p, std::move(hole)});
  }
  return cover;
}

OuterUnit outer_unit_coefficients(Activation act, double eps) {
  const double lo = inverse_sigmoidal(act, eps);
  const double hi = inverse_sigmoidal(act, 1.0 - eps);
  OuterUnit u;
  u.t = 3.0 * (hi - lo);
  u.s = lo - u.t / 3.0;
  return u;
}

Separator separate_sets_sigmoid(const PointCloud& A, const PointCloud& B, Activation act, double eps,
                                const QuadratureConfig& quad, const SeparatorOptions& options) {
  if (!is_sigmoidal(act)) throw UnsupportedActivation("separate_sets_sigmoid needs a sigmoidal activation");
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("separate_sets_sigmoid: eps must lie in (0, 1/2)");
  std::vector<CoverEntry> cover = greedy_cover(B, A, act, quad, options);
  const int big_n = static_cast<int>(cover.size());
  const double eps_used = std::min(eps, 1.0 / (2.0 * (big_n + 1)));
  const OuterUnit u = outer_unit_coefficients(act, eps_used);

  const Network outer(1, act,
                      {Layer{AffineLayer::dense(Matrix::Constant(1, 1, u.t), Vector::Constant(1, u.s)), true},
                       Layer{AffineLayer::dense(Matrix::Constant(1, 1, 1.0), Vector::Zero(1)), false}});
  std::vector<Network> terms;
  terms.reserve(cover.size());
  for (const CoverEntry& e : cover) terms.push_back(compose_scalar(outer, e.hole.h));
  const std::vector<double> coeffs(cover.size(), 1.0 / big_n);
  Network H = affine_combine(terms, coeffs, 0.0);

  const double a = 1.0 - eps_used;
  const double b = eps_used / big_n + 1.0 - 1.0 / big_n;
  return finish(A, B, std::move(H), std::move(cover), a, b, eps_used, options.threshold);
}

Separator separate_sets_relu(const PointCloud& A, const PointCloud& B, const QuadratureConfig& quad,
                             const SeparatorOptions& options) {
  std::vector<CoverEntry> cover = greedy_cover(B, A, Activation::kRelu, quad, options);
  const int big_n = static_cast<int>(cover.size());
  const Network outer = build_phi(1.0 / 3.0, 3.0, 2.0 / 3.0);
  std::vector<Network> terms;
  terms.reserve(cover.size());
  for (const CoverEntry& e : cover) terms.push_back(compose_scalar(outer, e.hole.h));
  const std::vector<double> coeffs(cover.size(), 1.0 / big_n);
  Network H = affine_combine(terms, coeffs, 0.0);
  return finish(A, B, std::move(H), std::move(cover), 1.0, 1.0 - 1.0 / big_n, 0.0, options.threshold);
}

Separator separate_sets(const PointCloud& A, const PointCloud& B, Activation act, double eps,
                        const QuadratureConfig& quad, const SeparatorOptions& options) {
  if (act == Activation::kRelu) return separate_sets_relu(A, B, quad, options);
  return separate_sets_sigmoid(A, B, act, eps, quad, options);
}

SeparatorCertificate reverify_separator(const Separator& sep, const PointCloud& A, const PointCloud& B, int density) {
  SeparatorCertificate cert = sep.certificate;
  bool ok = true;
  Vector best = Vector::Constant(B.size(), 1.0);
  for (const CoverEntry& e : sep.cover) {
    ok = ok && verify_hole(e.hole, &A, density).verified;
    best = best.cwiseMin(e.hole.h.eval_scalar(B.coords()));
  }
  // Cover completeness: every B sample lies in some hole neighbourhood.
  ok = ok && (best.array() < sep.threshold).all();
  cert.min_on_A = sep.H.eval_scalar(A.coords()).minCoeff();
  cert.max_on_B = sep.H.eval_scalar(B.coords()).maxCoeff();
  cert.verified = ok && cert.a > cert.b && cert.max_on_B < cert.b + 1e-12 && cert.min_on_A > cert.a - 1e-12;
  return cert;
}

}  // namespace sepnet
