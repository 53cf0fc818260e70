#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "helix/errors.hpp"
#include "helix/grid.hpp"

namespace helix {

/// Four-well potential, zero exactly on K = {(+-1, +-1)}.
inline constexpr double eval_W(Vec2 b) {
  const double a1 = 1.0 - b.x * b.x;
  const double a2 = 1.0 - b.y * b.y;
  return a1 * a1 + a2 * a2;
}

inline double dist_to_K(Vec2 b) { return std::hypot(std::abs(b.x) - 1.0, std::abs(b.y) - 1.0); }

/// Odd primitive of |1 - t^2| with Phi(0) = 0.
inline double eval_Phi(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return t - t * t * t / 3.0;
  const double v = a * a * a / 3.0 - a + 4.0 / 3.0;
  return t > 0.0 ? v : -v;
}

enum class EnergyKind { E1, E2, EA };

inline std::string_view to_string(EnergyKind k) {
  switch (k) {
    case EnergyKind::E1: return "E1";
    case EnergyKind::E2: return "E2";
    case EnergyKind::EA: return "EA";
  }
  return "?";
}

inline std::optional<EnergyKind> parse_energy_kind(std::string_view s) {
  if (s == "E1") return EnergyKind::E1;
  if (s == "E2") return EnergyKind::E2;
  if (s == "EA") return EnergyKind::EA;
  return std::nullopt;
}

struct EnergyBreakdown {
  double bulk = 0.0;
  double regularizer = 0.0;
  double total = 0.0;
  Rect region{};

  EnergyBreakdown& operator+=(const EnergyBreakdown& o) {
    bulk += o.bulk;
    regularizer += o.regularizer;
    total = bulk + regularizer;
    return *this;
  }
};

namespace detail {

/// Regularizer contribution of one interior edge. `horizontal` means the two cells are
/// neighbours along x.
inline double edge_cost(EnergyKind kind, double sigma, double h, Vec2 a, Vec2 b, bool horizontal) {
  const Vec2 d = b - a;
  switch (kind) {
    case EnergyKind::E1: return sigma * h * norm(d);
    case EnergyKind::E2: return sigma * sigma * dot(d, d);
    case EnergyKind::EA: {
      const double c = horizontal ? d.x : d.y;
      return sigma * sigma * c * c;
    }
  }
  return 0.0;
}

inline void check_sigma(double sigma, const char* who) {
  if (!(sigma > 0.0)) throw ParameterError(std::string(who) + ": sigma must be positive");
}

} // namespace detail

/// Energy restricted to the cells selected by `in_region(i, j)`. Edges count when both of
/// their cells are selected.
template <class InRegion>
EnergyBreakdown energy_masked(EnergyKind kind, const VectorField2D& f, double sigma,
                              InRegion&& in_region) {
  detail::check_sigma(sigma, "energy");
  const double h = f.h();
  const int nx = f.nx(), ny = f.ny();
  double bulk = 0.0, reg = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!in_region(i, j)) continue;
      const Vec2 v = f(i, j);
      bulk += eval_W(v);
      if (i + 1 < nx && in_region(i + 1, j))
        reg += detail::edge_cost(kind, sigma, h, v, f(i + 1, j), true);
      if (j + 1 < ny && in_region(i, j + 1))
        reg += detail::edge_cost(kind, sigma, h, v, f(i, j + 1), false);
    }
  EnergyBreakdown e;
  e.bulk = bulk * h * h;
  e.regularizer = reg;
  e.total = e.bulk + e.regularizer;
  return e;
}

/// Midpoint-rule bulk plus edge-wise regularizer over the cells whose centers lie in
/// `region`.
inline EnergyBreakdown energy(EnergyKind kind, const VectorField2D& f, double sigma,
                              const Rect& region) {
  detail::check_sigma(sigma, "energy");
  const Rect dom = f.spec().domain();
  const double tol = 1e-12 * std::max(1.0, dom.width());
  if (region.x0 < dom.x0 - tol || region.x1 > dom.x1 + tol || region.y0 < dom.y0 - tol ||
      region.y1 > dom.y1 + tol)
    throw GeometryError("energy: region is not contained in the field's domain");
  EnergyBreakdown e;
  if (region.area() > 0.0) {
    const GridSpec& g = f.spec();
    e = energy_masked(kind, f, sigma, [&](int i, int j) { return region.contains(g.center(i, j)); });
  }
  e.region = region;
  return e;
}

inline EnergyBreakdown energy(EnergyKind kind, const VectorField2D& f, double sigma) {
  return energy(kind, f, sigma, f.spec().domain());
}

enum class SliceAxis { horizontal, vertical };

/// One-dimensional energy along the grid line nearest to `coordinate` (a row for
/// horizontal slices, a column for vertical ones), restricted to cells whose centers lie
/// in [a, b]. The variation is taken along the slice.
inline double slice_energy(EnergyKind kind, const VectorField2D& f, double sigma, SliceAxis axis,
                           double coordinate, double a, double b) {
  detail::check_sigma(sigma, "slice_energy");
  const Rect dom = f.spec().domain();
  const bool horiz = axis == SliceAxis::horizontal;
  const double lo = horiz ? dom.y0 : dom.x0;
  const double hi = horiz ? dom.y1 : dom.x1;
  if (coordinate < lo || coordinate > hi)
    throw GeometryError("slice_energy: slice coordinate outside the domain");
  if (!(b > a)) return 0.0;

  const GridSpec& g = f.spec();
  const double h = g.h();
  const int line = horiz ? g.nearest_row(coordinate) : g.nearest_column(coordinate);
  const int count = horiz ? g.nx() : g.ny();
  auto at = [&](int k) { return horiz ? f(k, line) : f(line, k); };
  auto pos = [&](int k) { return horiz ? g.center(k, line).x : g.center(line, k).y; };

  double bulk = 0.0, reg = 0.0;
  for (int k = 0; k < count; ++k) {
    const double p = pos(k);
    if (p < a || p > b) continue;
    bulk += eval_W(at(k)) * h;
    if (k + 1 < count && pos(k + 1) <= b) {
      const Vec2 d = at(k + 1) - at(k);
      switch (kind) {
        case EnergyKind::E1: reg += sigma * norm(d); break;
        case EnergyKind::E2: reg += sigma * sigma * dot(d, d) / h; break;
        case EnergyKind::EA: {
          const double c = horiz ? d.x : d.y;
          reg += sigma * sigma * c * c / h;
          break;
        }
      }
    }
  }
  return bulk + reg;
}

} // namespace helix
