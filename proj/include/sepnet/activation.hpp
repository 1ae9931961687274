#pragma once

#include <cmath>
#include <string>
#include <string_view>

namespace sepnet {

// Activation catalog. Sigmoidal kinds are already normalized to be strictly
// increasing with range (0,1); relu is max(0, x).
enum class Activation { kLogistic, kTanh, kRelu };

bool is_sigmoidal(Activation act);

// "logistic", "tanh", "relu".
std::string_view activation_name(Activation act);
Activation parse_activation(std::string_view name);

// Throws DomainError on non-finite input.
double eval_activation(Activation act, double x);

// Unchecked variant for inner loops; x is assumed finite.
inline double apply_activation(Activation act, double x) {
  switch (act) {
    case Activation::kLogistic:
      return 1.0 / (1.0 + std::exp(-x));
    case Activation::kTanh:
      // (tanh(x) + 1) / 2, written in the form that keeps small outputs
      // representable instead of cancelling against -1.
      return 1.0 / (1.0 + std::exp(-2.0 * x));
    case Activation::kRelu:
      return x > 0.0 ? x : 0.0;
  }
  return x;
}

// x with eval_activation(act, x) == p. Requires 0 < p < 1 and a sigmoidal
// kind.
double inverse_sigmoidal(Activation act, double p);

// Smallest slope c such that sigma(c (x - 3 delta / 2)) < eps_low on
// (-inf, delta] and > 1 - eps_high on [2 delta, inf), inflated by 1 + 1e-6
// so both inequalities hold strictly.
double solve_tail_slope(Activation act, double delta, double eps_low, double eps_high);

}  // namespace sepnet
