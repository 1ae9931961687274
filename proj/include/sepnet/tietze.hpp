#pragma once

#include <optional>
#include <vector>

#include "sepnet/separator.hpp"

namespace sepnet {

struct LevelSets {
  PointCloud plus;   // samples with value >= M - w
  PointCloud minus;  // samples with value <= m + w
  std::vector<int> plus_index;
  std::vector<int> minus_index;
};

// Upper and lower thirds of the value range, w = (M - m) / 3. Requires
// M > m; both sets are nonempty and disjoint.
LevelSets level_sets(const LabeledCloud& residual);

struct SynthesisBudgets {
  int max_iterations = 64;
  long long max_first_layer_width = 2'000'000;
  int hole_retry_rounds = 8;
};

struct SynthesisOptions {
  SynthesisBudgets budgets;
  // Separator tolerance before the 1 / (2 (N + 1)) cap (sigmoid only).
  double separator_eps = 0.1;
  QuadratureConfig quadrature;
  bool farthest_first = false;
};

struct IterationRecord {
  double osc_before = 0.0;
  double osc_after = 0.0;
  double contraction = 0.0;  // osc_after / osc_before
  double a = 0.0;
  double b = 0.0;
  double c_step = 0.0;       // 1 - (a - b) / 3
  std::vector<int> widths;   // hidden widths of this step's separator
  int n_cover = 0;
  double summand_sup = 0.0;  // max |g_k| on the samples
  double centering_shift = 0.0;
};

struct SynthesisReport {
  std::vector<IterationRecord> iterations;
  double final_constant = 0.0;
  double final_sup_error = 0.0;
  double eps_target = 0.0;
};

struct SynthesisResult {
  Network network;
  SynthesisReport report;
};

// Budget exhaustion or a failed step. Carries the report so far and, when
// one could be assembled, the partial approximant.
class SynthesisError : public ConstructionError {
 public:
  SynthesisError(const std::string& what, SynthesisReport report, std::optional<Network> partial)
      : ConstructionError(what), report_(std::move(report)), partial_(std::move(partial)) {}
  const SynthesisReport& report() const { return report_; }
  const std::optional<Network>& partial() const { return partial_; }

 private:
  SynthesisReport report_;
  std::optional<Network> partial_;
};

// Oscillation-contraction loop: each step separates the level sets of the
// residual and subtracts g = (m + w) + w H, until osc <= 2 eps_target. The
// result is C + sum_k g_k as one network with two hidden layers (a constant
// network when K carries a single value).
SynthesisResult synthesize(const LabeledCloud& K, Activation act, double eps_target,
                           const SynthesisOptions& options = {});

// Single-hidden-layer interpolant F = t1 + sum_i (T_i - t1) u_i on a finite
// set, with u_i = 1 - hole_i near 1 at p_i and near 0 at the other points.
Network synthesize_finite(const LabeledCloud& K, Activation act, double eps,
                          const QuadratureConfig& quad = {}, const HoleOptions& hole_options = {});

struct VerifyResult {
  double sup_error = 0.0;
  int argmax_index = 0;
  Vector argmax_point;
};

// max_i |net(x_i) - value_i| and its witness.
VerifyResult verify(const Network& net, const LabeledCloud& K);

}  // namespace sepnet
