#pragma once

#include <cmath>
#include <numbers>

#include "helix/errors.hpp"
#include "helix/grid.hpp"

namespace helix {

/// Standard exponential bump rho(x) = exp(-1/(1-|4x|^2)) / Z on B_{1/4}(0), rescaled to
/// rho_eps(x) = eps^-2 rho(x/eps).
///
/// Z = int_{B_1/4} exp(-1/(1-|4x|^2)) dx. In polar coordinates with u = (4r)^2 this is
/// (pi/16) int_0^1 exp(-1/(1-u)) du = (pi/16) (e^-1 - E1(1)), and E1(1) = -Ei(-1).
struct MollifierSpec {
  double eps;
  double Z;

  explicit MollifierSpec(double eps_) : eps(eps_), Z(normalization()) {
    if (!(eps_ > 0.0)) throw ParameterError("MollifierSpec: eps must be positive");
  }

  static double normalization() {
    static const double z = std::numbers::pi / 16.0 * (std::exp(-1.0) + std::expint(-1.0));
    return z;
  }

  double support_radius() const { return 0.25 * eps; }
  double peak() const { return std::exp(-1.0) / (Z * eps * eps); }
};

inline double mollifier_value(const MollifierSpec& m, Point x) {
  const double s = 4.0 * norm(x) / m.eps;
  if (s >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s)) / (m.Z * m.eps * m.eps);
}

/// Mass of rho_eps(. - center) inside `cell`, by a q x q midpoint rule.
inline double mollifier_mass(const MollifierSpec& m, Point center, const Rect& cell, int q = 4) {
  const double r = m.support_radius();
  if (cell.distance_to(center) >= r) return 0.0;
  const double dx = cell.width() / q;
  const double dy = cell.height() / q;
  double sum = 0.0;
  for (int b = 0; b < q; ++b)
    for (int a = 0; a < q; ++a) {
      const Point p{cell.x0 + (a + 0.5) * dx, cell.y0 + (b + 0.5) * dy};
      sum += mollifier_value(m, p - center);
    }
  return sum * dx * dy;
}

} // namespace helix
