#include "sepnet/tietze.hpp"

#include <cmath>
#include <sstream>

namespace sepnet {

namespace {

long long first_layer_width(const std::vector<Network>& parts) {
  long long w = 0;
  for (const Network& p : parts) w += p.layers().front().affine.out_dim();
  return w;
}

Network assemble(const std::vector<Network>& parts, const std::vector<double>& coeffs, double constant, int n,
                 Activation act) {
  if (parts.empty()) return Network::constant(n, constant, act);
  return affine_combine(parts, coeffs, constant);
}

}  // namespace

LevelSets level_sets(const LabeledCloud& residual) {
  validate(residual);
  const double hi = residual.values.maxCoeff();
  const double lo = residual.values.minCoeff();
  if (!(hi > lo)) throw DomainError("level_sets: residual is constant");
  const double w = (hi - lo) / 3.0;
  LevelSets sets;
  for (int i = 0; i < residual.size(); ++i) {
    const double v = residual.values(i);
    if (v >= hi - w) sets.plus_index.push_back(i);
    if (v <= lo + w) sets.minus_index.push_back(i);
  }
  sets.plus = residual.points.subset(sets.plus_index);
  sets.minus = residual.points.subset(sets.minus_index);
  return sets;
}

SynthesisResult synthesize(const LabeledCloud& K_in, Activation act, double eps_target,
                           const SynthesisOptions& options) {
  if (!(eps_target > 0.0)) throw DomainError("synthesize: eps_target must be positive");
  if (options.budgets.max_iterations < 0 || options.budgets.max_first_layer_width < 1 ||
      options.budgets.hole_retry_rounds < 0) {
    throw ConfigError("synthesize: budgets must be positive");
  }
  if (is_sigmoidal(act) && !(options.separator_eps > 0.0 && options.separator_eps < 0.5)) {
    throw ConfigError("synthesize: separator eps must lie in (0, 1/2)");
  }
  const LabeledCloud K = deduplicate(K_in);
  const int n = K.dim();

  SeparatorOptions sep_opts;
  sep_opts.hole.retry_rounds = options.budgets.hole_retry_rounds;
  sep_opts.farthest_first = options.farthest_first;

  SynthesisReport report;
  report.eps_target = eps_target;
  LabeledCloud residual = K;
  std::vector<Network> parts;
  std::vector<double> coeffs;
  double constant = 0.0;
  double shifts = 0.0;

  const auto fail = [&](const std::string& why) -> SynthesisError {
    const double mid = 0.5 * (residual.values.maxCoeff() + residual.values.minCoeff());
    std::optional<Network> partial;
    if (!parts.empty() || report.iterations.empty()) partial = assemble(parts, coeffs, constant + mid, n, act);
    report.final_constant = shifts + mid;
    if (partial) report.final_sup_error = verify(*partial, K).sup_error;
    return SynthesisError(why, report, std::move(partial));
  };

  for (int iter = 0;; ++iter) {
    double hi = residual.values.maxCoeff();
    double lo = residual.values.minCoeff();
    if (hi - lo <= 2.0 * eps_target) break;
    if (iter >= options.budgets.max_iterations) {
      std::ostringstream msg;
      msg << "iteration budget of " << options.budgets.max_iterations << " exhausted with oscillation " << hi - lo;
      throw fail(msg.str());
    }

    IterationRecord rec;
    // The step bounds assume m <= 0 <= M; recenter when the residual drifted.
    if (lo > 0.0 || hi < 0.0) {
      const double mid = 0.5 * (hi + lo);
      residual.values.array() -= mid;
      constant += mid;
      shifts += mid;
      rec.centering_shift = mid;
      hi -= mid;
      lo -= mid;
    }
    const double osc = hi - lo;
    const double w = osc / 3.0;
    rec.osc_before = osc;

    const LevelSets sets = level_sets(residual);
    Separator sep = separate_sets(sets.plus, sets.minus, act, options.separator_eps, options.quadrature, sep_opts);
    const SeparatorCertificate& cert = sep.certificate;
    rec.a = cert.a;
    rec.b = cert.b;
    rec.c_step = 1.0 - (cert.a - cert.b) / 3.0;
    rec.n_cover = cert.n_cover;
    rec.widths = network_stats(sep.H).widths;
    if (!cert.verified) {
      report.iterations.push_back(rec);
      throw fail("separator certificate failed at iteration " + std::to_string(iter));
    }

    const Vector h_vals = sep.H.eval_scalar(K.points.coords());
    const Vector g = (lo + w) + w * h_vals.array();
    rec.summand_sup = g.cwiseAbs().maxCoeff();
    residual.values -= g;
    const double hi_after = residual.values.maxCoeff();
    const double lo_after = residual.values.minCoeff();
    rec.osc_after = hi_after - lo_after;
    rec.contraction = rec.osc_after / osc;

    parts.push_back(std::move(sep.H));
    coeffs.push_back(w);
    constant += lo + w;
    report.iterations.push_back(rec);

    if (rec.summand_sup > (2.0 / 3.0) * osc + 1e-9) {
      throw fail("summand bound violated at iteration " + std::to_string(iter));
    }
    if (rec.osc_after > rec.c_step * osc + 1e-9) {
      throw fail("contraction bound violated at iteration " + std::to_string(iter));
    }
    if (first_layer_width(parts) > options.budgets.max_first_layer_width) {
      std::ostringstream msg;
      msg << "first-layer width " << first_layer_width(parts) << " exceeds the budget of "
          << options.budgets.max_first_layer_width;
      throw fail(msg.str());
    }
  }

  const double mid = 0.5 * (residual.values.maxCoeff() + residual.values.minCoeff());
  Network net = assemble(parts, coeffs, constant + mid, n, act);
  report.final_constant = shifts + mid;
  report.final_sup_error = verify(net, K).sup_error;
  return SynthesisResult{std::move(net), std::move(report)};
}

Network synthesize_finite(const LabeledCloud& K_in, Activation act, double eps, const QuadratureConfig& quad,
                          const HoleOptions& hole_options) {
  if (!(eps > 0.0)) throw DomainError("synthesize_finite: eps must be positive");
  const LabeledCloud K = deduplicate(K_in);
  const int n = K.dim();
  const int count = K.size();
  const double t1 = K.values.minCoeff();
  const double d = K.values.maxCoeff() - t1;
  if (d == 0.0) return Network::constant(n, t1, act);

  // The construction needs eps < d N / 2; a smaller eps only tightens it.
  const double eps_eff = std::min(eps, 0.5 * d * count * (1.0 - 1e-9));
  const double hole_eps = eps_eff / (d * count);
  const RotationQuadrature q = quad.build(n);

  std::vector<Network> holes;
  std::vector<double> coeffs;
  double constant = t1;
  for (int i = 0; i < count; ++i) {
    const double weight = K.values(i) - t1;
    if (weight == 0.0) continue;
    std::vector<int> others;
    for (int j = 0; j < count; ++j) {
      if (j != i) others.push_back(j);
    }
    const PointCloud rest = K.points.subset(others);
    const Vector p = K.points.point(i);
    const double dist = distance_to_cloud(p, rest);
    Hole hole = act == Activation::kRelu ? build_hole_relu(n, p, dist, hole_eps, q, &rest, hole_options)
                                         : build_hole_sigmoid(act, n, p, dist, hole_eps, q, &rest, hole_options);
    // weight * (1 - hole) = weight - weight * hole
    constant += weight;
    coeffs.push_back(-weight);
    holes.push_back(std::move(hole.h));
  }
  return affine_combine(holes, coeffs, constant);
}

VerifyResult verify(const Network& net, const LabeledCloud& K) {
  validate(K);
  if (net.input_dim() != K.dim()) throw ShapeError("verify: network and cloud dimensions differ");
  const Vector err = (net.eval_scalar(K.points.coords()) - K.values).cwiseAbs();
  VerifyResult r;
  Eigen::Index at = 0;
  r.sup_error = err.maxCoeff(&at);
  r.argmax_index = static_cast<int>(at);
  r.argmax_point = K.points.point(r.argmax_index);
  return r;
}

}  // namespace sepnet
