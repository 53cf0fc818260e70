#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "helix/errors.hpp"

namespace helix {

/// sigma > sqrt(2) pi eps and theta in (0, 1/2]. The sigma bound is accepted with a
/// relative slack of 1e-12 so that eps = sigma / (sqrt(2) pi) is usable.
struct ScalingParams {
  double sigma;
  double theta;
  double eps;

  void validate() const {
    if (!(theta > 0.0) || theta > 0.5)
      throw ParameterError("theta must lie in (0, 1/2], got " + std::to_string(theta));
    if (!(eps > 0.0)) throw ParameterError("eps must be positive");
    if (!(sigma > 0.0) ||
        sigma < std::numbers::sqrt2 * std::numbers::pi * eps * (1.0 - 1e-12))
      throw ParameterError("need sigma > sqrt(2) pi eps (sigma=" + std::to_string(sigma) +
                           ", eps=" + std::to_string(eps) + ")");
  }
};

/// Which logarithm enters the vortex term.
enum class VortexLog {
  abs_log_theta,         // theta sigma^3/eps^2 + theta sigma |log theta|
  log_sigma_over_eps_theta  // theta sigma^3/eps^2 + theta sigma log(sigma/(eps theta))
};

enum class Regime { uniform = 0, branching = 1, vortex = 2 };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::uniform: return "uniform";
    case Regime::branching: return "branching";
    case Regime::vortex: return "vortex";
  }
  return "?";
}

struct ScalingTerms {
  double uniform;    // theta^2
  double branching;  // sigma (|log sigma| / |log theta| + 1)
  double vortex;

  double min() const { return std::min({uniform, branching, vortex}); }
  Regime argmin() const {
    if (uniform <= branching && uniform <= vortex) return Regime::uniform;
    if (branching <= vortex) return Regime::branching;
    return Regime::vortex;
  }
};

inline ScalingTerms scaling_terms(const ScalingParams& p, VortexLog log = VortexLog::abs_log_theta) {
  p.validate();
  const double lt = std::abs(std::log(p.theta));
  ScalingTerms t{};
  t.uniform = p.theta * p.theta;
  t.branching = p.sigma * (std::abs(std::log(p.sigma)) / lt + 1.0);
  const double core = p.theta * p.sigma * p.sigma * p.sigma / (p.eps * p.eps);
  const double tail = log == VortexLog::abs_log_theta
                          ? p.theta * p.sigma * lt
                          : p.theta * p.sigma * std::log(p.sigma / (p.eps * p.theta));
  t.vortex = core + tail;
  return t;
}

inline double scaling_s(const ScalingParams& p, VortexLog log = VortexLog::abs_log_theta) {
  return scaling_terms(p, log).min();
}

} // namespace helix
