#include "sepnet/activation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sepnet/errors.hpp"

namespace sepnet {

bool is_sigmoidal(Activation act) { return act != Activation::kRelu; }

std::string_view activation_name(Activation act) {
  switch (act) {
    case Activation::kLogistic:
      return "logistic";
    case Activation::kTanh:
      return "tanh";
    case Activation::kRelu:
      return "relu";
  }
  return "?";
}

Activation parse_activation(std::string_view name) {
  if (name == "logistic") return Activation::kLogistic;
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  throw ConfigError("unknown activation '" + std::string(name) + "' (expected logistic, tanh or relu)");
}

double eval_activation(Activation act, double x) {
  if (!std::isfinite(x)) throw DomainError("activation input is not finite");
  return apply_activation(act, x);
}

double inverse_sigmoidal(Activation act, double p) {
  if (!is_sigmoidal(act)) throw UnsupportedActivation("relu has no inverse on (0,1)");
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << "inverse_sigmoidal: p = " << p << " is outside (0,1)";
    throw DomainError(msg.str());
  }
  // log(p) - log1p(-p) keeps full relative precision for p near 0 and 1.
  const double logit = std::log(p) - std::log1p(-p);
  return act == Activation::kTanh ? 0.5 * logit : logit;
}

double solve_tail_slope(Activation act, double delta, double eps_low, double eps_high) {
  if (!is_sigmoidal(act)) throw UnsupportedActivation("solve_tail_slope needs a sigmoidal activation");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("solve_tail_slope: delta must be positive");
  if (!(eps_low > 0.0 && eps_low < 1.0) || !(eps_high > 0.0 && eps_high < 1.0)) {
    throw DomainError("solve_tail_slope: tail thresholds must lie in (0,1)");
  }
  // At x = delta the argument is -c delta / 2, at x = 2 delta it is c delta / 2;
  // monotonicity makes those the binding points.
  const double need = std::max(-inverse_sigmoidal(act, eps_low), inverse_sigmoidal(act, 1.0 - eps_high));
  const double c = (2.0 / delta) * need * (1.0 + 1e-6);
  return c > 0.0 ? c : std::numeric_limits<double>::min();
}

}  // namespace sepnet
