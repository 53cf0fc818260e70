#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "helix/energy.hpp"
#include "helix/errors.hpp"
#include "helix/grid.hpp"
#include "helix/mollifier.hpp"
#include "helix/scaling.hpp"
#include "helix/vorticity.hpp"

namespace helix {

enum class CompetitorKind { uniform, branching, vortex_array };

inline const char* to_string(CompetitorKind k) {
  switch (k) {
    case CompetitorKind::uniform: return "uniform";
    case CompetitorKind::branching: return "branching";
    case CompetitorKind::vortex_array: return "vortex";
  }
  return "?";
}

/// The field stores one vertical period of a y-periodic pattern. Row J of the unit square
/// (center (J + 1/2) h) corresponds to tile row (J - row_offset) mod period_rows.
struct PeriodicRows {
  int period_rows;
  int row_offset;
  double domain_height = 1.0;
};

struct Competitor {
  CompetitorKind kind;
  VectorField2D field;
  VorticityMeasure measure;
  ScalingParams params;
  /// Tolerance for admissibility_report that this construction guarantees.
  double declared_tolerance;
  /// Atoms of the full construction that lie in the unit square (equals measure size
  /// unless the field is a periodic tile).
  int atoms_in_domain = 0;
  int levels = 0;
  std::optional<PeriodicRows> tiling;
};

// ---------------------------------------------------------------------------------------
// uniform

inline Competitor build_uniform(const ScalingParams& p, const GridSpec& g) {
  p.validate();
  const VectorField2D f(g, Vec2{1.0, 1.0 - 2.0 * p.theta});
  return Competitor{CompetitorKind::uniform, f, VorticityMeasure::empty(p.sigma, p.eps, g.domain()),
                    p, 1e-9, 0, 0, std::nullopt};
}

// ---------------------------------------------------------------------------------------
// branching

struct BranchingOptions {
  /// Width of generation k as a multiple of its period.
  double aspect = 1.5;
  /// Box-filter width applied to the potential; 0 keeps the sharp interfaces.
  double smoothing = 0.0;
};

/// Layout of the self-similar construction in node units of the grid.
struct BranchingGeometry {
  int refinement;               // periods shrink by this factor per generation
  std::vector<double> period;   // lambda_k, k = 0..levels
  std::vector<int> x_start;     // node column where generation k begins (k >= 1), x_start[levels+1] = layer
  std::vector<long> offset;     // additive constant of generation k, in units of h
  int layer_nodes;
};

inline int refinement_factor(double theta) {
  return std::max(2, static_cast<int>(std::ceil(1.0 / theta - 1e-9)));
}

inline BranchingGeometry branching_geometry(const ScalingParams& p, const GridSpec& g, int levels,
                                            const BranchingOptions& opt = {}) {
  if (levels < 1) throw ParameterError("build_branching: levels must be >= 1");
  const double h = g.h();
  BranchingGeometry geo;
  geo.refinement = refinement_factor(p.theta);
  const int N = geo.refinement;
  // Coarsest period 1/M keeps the whole tail of generations within half the domain.
  const int M = std::max(1, static_cast<int>(std::ceil(2.0 * opt.aspect / (N - 1))));
  geo.period.resize(levels + 1);
  geo.period[0] = 1.0 / M;
  for (int k = 1; k <= levels; ++k) geo.period[k] = geo.period[k - 1] / N;
  if (geo.period[levels] < 4.0 * h)
    throw GridError("build_branching: " + std::to_string(levels) +
                    " levels need period " + std::to_string(geo.period[levels]) +
                    " >= 4h = " + std::to_string(4.0 * h));
  geo.layer_nodes = static_cast<int>(std::lround(geo.period[levels] / h));
  geo.x_start.assign(levels + 2, 0);
  geo.x_start[levels + 1] = geo.layer_nodes;
  for (int k = levels; k >= 1; --k)
    geo.x_start[k] =
        geo.x_start[k + 1] + std::max(1, static_cast<int>(std::lround(opt.aspect * geo.period[k] / h)));
  if (geo.x_start[1] >= g.nx() - 1)
    throw GridError("build_branching: generations do not fit in the domain");
  geo.offset.assign(levels + 1, 0);
  for (int k = 0; k < levels; ++k) {
    const long sign = (k % 2 == 0) ? 1 : -1;
    geo.offset[k + 1] = geo.offset[k] + 2 * sign * geo.x_start[k + 1];
  }
  return geo;
}

namespace detail {

/// Zero-mean sawtooth with slope 2 theta on a fraction 1-theta of each period and
/// -2(1-theta) on the rest, so that (1-2 theta) t + zeta(t) has slopes +-1.
inline double sawtooth(double t, double theta) {
  const double f = t - std::floor(t);
  const double q = theta * (1.0 - theta);
  if (f <= 1.0 - theta) return 2.0 * theta * f - q;
  return q - 2.0 * (1.0 - theta) * (f - (1.0 - theta));
}

/// Lattice path with steps +-1 tracking Z(y)/h = ((1-2theta) y + lambda zeta(y/lambda))/h at
/// node rows; stays within one step of the exact profile, and its kinks sit on node rows.
inline std::vector<long> zigzag_path(double theta, double lambda, double h, int rows) {
  std::vector<long> z(rows + 1);
  auto exact = [&](int j) {
    const double y = j * h;
    return ((1.0 - 2.0 * theta) * y + lambda * sawtooth(y / lambda, theta)) / h;
  };
  z[0] = std::lround(exact(0));
  for (int j = 0; j < rows; ++j) {
    const double target = exact(j + 1);
    const long up = z[j] + 1, down = z[j] - 1;
    z[j + 1] = std::abs(up - target) <= std::abs(down - target) ? up : down;
  }
  return z;
}

/// Moving average of half-width m along one direction with odd reflection at both ends,
/// which keeps boundary values and linear profiles unchanged.
inline void box_filter(std::vector<double>& a, int count, int stride, int lines, int line_stride,
                       int m) {
  if (m <= 0) return;
  std::vector<double> ext(count + 2 * m), out(count);
  for (int l = 0; l < lines; ++l) {
    double* base = a.data() + static_cast<std::size_t>(l) * line_stride;
    auto at = [&](int k) { return base[static_cast<std::size_t>(k) * stride]; };
    for (int k = 0; k < count; ++k) ext[k + m] = at(k);
    for (int k = 1; k <= m; ++k) {
      ext[m - k] = 2.0 * at(0) - at(std::min(k, count - 1));
      ext[m + count - 1 + k] = 2.0 * at(count - 1) - at(std::max(count - 1 - k, 0));
    }
    double run = 0.0;
    for (int k = 0; k < 2 * m + 1; ++k) run += ext[k];
    for (int k = 0; k < count; ++k) {
      out[k] = run / (2 * m + 1);
      if (k + 2 * m + 1 < count + 2 * m) run += ext[k + 2 * m + 1] - ext[k];
    }
    for (int k = 0; k < count; ++k) base[static_cast<std::size_t>(k) * stride] = out[k];
  }
}

} // namespace detail

/// Curl-free competitor: generation k (k = 0 at the right) is the laminate
/// (-1)^k x + Z_k(y) with Z_k a +-1 zigzag of period lambda_k = lambda_0 N^-k, N = ceil(1/theta);
/// neighbouring generations are glued by max/min, so the gradient takes values in K
/// everywhere outside a boundary layer of width lambda_levels in which the potential is
/// interpolated linearly to (1-2 theta) y. The potential is sampled at grid nodes and the
/// cell values are averaged node differences, hence discretely curl-free.
inline Competitor build_branching(const ScalingParams& p, const GridSpec& g, int levels,
                                  const BranchingOptions& opt = {}) {
  p.validate();
  const Rect dom = g.domain();
  if (std::abs(dom.x0) > 1e-12 || std::abs(dom.y0) > 1e-12 || g.nx() != g.ny())
    throw GeometryError("build_branching: grid must cover the unit square");
  const BranchingGeometry geo = branching_geometry(p, g, levels, opt);
  const int n = g.nx();
  const int nodes = n + 1;
  const double h = g.h();
  const double slope = 1.0 - 2.0 * p.theta;
  const int G = levels;
  const int L = geo.layer_nodes;

  std::vector<std::vector<long>> zig(G + 1);
  for (int k = 0; k <= G; ++k) zig[k] = detail::zigzag_path(p.theta, geo.period[k], h, n);
  auto sign = [](int k) { return (k % 2 == 0) ? 1L : -1L; };

  // Potential in units of h; integer valued for x >= layer.
  std::vector<double> U(static_cast<std::size_t>(nodes) * nodes);
  auto idx = [&](int i, int j) { return static_cast<std::size_t>(j) * nodes + i; };
  for (int j = 0; j < nodes; ++j) {
    const double D = zig[G][j] - slope * j;
    for (int i = 0; i < nodes; ++i) {
      if (i < L) {
        U[idx(i, j)] = slope * j + geo.offset[G] + sign(G) * i + (static_cast<double>(i) / L) * D;
        continue;
      }
      long v = sign(G) * i + zig[G][j] + geo.offset[G];
      for (int k = G - 1; k >= 0; --k) {
        const long uk = sign(k) * i + zig[k][j] + geo.offset[k];
        v = sign(k) > 0 ? std::max(uk, v) : std::min(uk, v);
      }
      if (i == L && v != sign(G) * i + zig[G][j] + geo.offset[G])
        throw ConsistencyError("build_branching: an outer generation reaches the boundary layer");
      U[idx(i, j)] = static_cast<double>(v);
    }
  }

  const int m = static_cast<int>(std::lround(0.5 * opt.smoothing / h));
  const bool smooth = m > 0;
  if (smooth) {
    detail::box_filter(U, nodes, 1, nodes, nodes, m);      // along x
    detail::box_filter(U, nodes, nodes, nodes, 1, m);      // along y
  }

  // Node increments (slopes) along x at node row j and along y at node column i.
  auto inc_x = [&](int i, int j) {
    if (!smooth && i + 1 <= L) return sign(G) + (zig[G][j] - slope * j) / L;
    return U[idx(i + 1, j)] - U[idx(i, j)];
  };
  auto inc_y = [&](int i, int j) {
    if (!smooth && i < L)
      return slope + (static_cast<double>(i) / L) * ((zig[G][j + 1] - zig[G][j]) - slope);
    return U[idx(i, j + 1)] - U[idx(i, j)];
  };

  VectorField2D f(g);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      f(i, j) = {0.5 * (inc_x(i, j) + inc_x(i, j + 1)), 0.5 * (inc_y(i, j) + inc_y(i + 1, j))};

  // Smoothing works on rounded potentials of size ~1/h, so the discrete curl is only
  // zero to that rounding level.
  const double tol = smooth ? 1e-13 * nodes / (h * h) : 1e-9;
  return Competitor{CompetitorKind::branching, std::move(f), VorticityMeasure::empty(p.sigma, p.eps, dom),
                    p, tol, 0, levels, std::nullopt};
}

/// Number of generations the grid can carry (period of the last one >= 4h).
inline int max_branching_levels(const ScalingParams& p, const GridSpec& g,
                                const BranchingOptions& opt = {}) {
  int best = 0;
  for (int k = 1; k < 64; ++k) {
    try {
      branching_geometry(p, g, k, opt);
      best = k;
    } catch (const GridError&) {
      break;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------------------
// vortex array

/// Gradient of the building block u on one cell of height s = sigma/(2 theta), periodized in
/// y with period s and with vortices of strength sigma at (s, k s). Distances to the
/// singular corner below `cutoff` are clamped.
inline Vec2 vortex_block_gradient(double x, double y, double theta, double s, double cutoff) {
  if (x >= s) return {1.0, 1.0};
  const double yc = y - std::floor(y / s) * s;
  if (yc >= x) return {1.0, 1.0 - 2.0 * theta};
  const double gap = std::max(s - yc, cutoff);
  const double b1 = 1.0 + 2.0 * theta * yc / gap;
  const double b2 = 1.0 - 2.0 * theta + 2.0 * theta * (x - 2.0 * yc) / gap +
                    2.0 * theta * (x - yc) * yc / (gap * gap);
  return {b1, b2};
}

struct VortexLayout {
  double spacing;   // s = sigma / (2 theta)
  double x_atom;    // 2 s
  double phase;     // y of one atom, in [0, s)
  double margin;    // distance from y = 0 and y = 1 to the nearest lattice row of atoms
  std::vector<Atom> atoms_in_domain;
};

/// Picks the vertical phase of the atom lattice so that no atom ball straddles y = 0 or
/// y = 1. The phase is a multiple of h.
inline VortexLayout vortex_layout(const ScalingParams& p, double h) {
  p.validate();
  if (!(p.theta > p.sigma))
    throw RegimeError("vortex array needs theta > sigma (theta=" + std::to_string(p.theta) +
                      ", sigma=" + std::to_string(p.sigma) + ")");
  VortexLayout lay;
  lay.spacing = p.sigma / (2.0 * p.theta);
  lay.x_atom = 2.0 * lay.spacing;
  if (lay.x_atom + p.eps > 1.0) throw RegimeError("vortex array does not fit in the unit square");
  const double s = lay.spacing;
  auto lattice_distance = [&](double q, double phase) {
    double d = std::fmod(q - phase, s);
    if (d < 0) d += s;
    return std::min(d, s - d);
  };
  const long steps = static_cast<long>(std::ceil(s / h));
  lay.margin = -1.0;
  for (long k = 0; k < steps; ++k) {
    const double phase = k * h;
    const double m = std::min(lattice_distance(0.0, phase), lattice_distance(1.0, phase));
    if (m > lay.margin + 1e-15) {
      lay.margin = m;
      lay.phase = phase;
    }
  }
  if (lay.margin < p.eps)
    throw GeometryError("vortex_layout: atom spacing too small to keep eps-balls off the boundary");
  for (double y = lay.phase; y < 1.0; y += s)
    if (y - p.eps >= 0.0 && y + p.eps <= 1.0) lay.atoms_in_domain.push_back({{lay.x_atom, y}, 1});
  return lay;
}

namespace detail {

struct Stencil {
  std::vector<int> di, dj;
  std::vector<double> w;
  int radius;
};

/// Normalized cell-lattice samples of rho_eps.
inline Stencil mollifier_stencil(const MollifierSpec& m, double h) {
  Stencil st;
  st.radius = static_cast<int>(std::ceil(m.support_radius() / h));
  double sum = 0.0;
  for (int b = -st.radius; b <= st.radius; ++b)
    for (int a = -st.radius; a <= st.radius; ++a) {
      const double v = mollifier_value(m, {a * h, b * h});
      if (v <= 0.0) continue;
      st.di.push_back(a);
      st.dj.push_back(b);
      st.w.push_back(v);
      sum += v;
    }
  for (auto& w : st.w) w /= sum;
  return st;
}

/// u on one block, 0 <= yc <= s; continuous, with the vortex at the corner (s, s).
inline double vortex_block_potential(double x, double yc, double theta, double s) {
  if (x >= s) return yc + x;
  if (yc >= x) return (1.0 - 2.0 * theta) * yc + x;
  return (1.0 - 2.0 * theta) * yc + 2.0 * theta * yc * (x - yc) / (s - yc) + x;
}

/// int_{x0}^{x1} u(x, yc) dx; u is piecewise linear in x with kinks at yc and s.
inline double block_row_integral(double yc, double x0, double x1, double theta, double s) {
  double pts[4] = {x0, x1, x1, x1};
  int n = 2;
  if (yc > x0 && yc < x1) pts[n++] = yc;
  if (s > x0 && s < x1) pts[n++] = s;
  std::sort(pts, pts + n);
  double sum = 0.0;
  for (int k = 0; k + 1 < n; ++k)
    sum += 0.5 * (pts[k + 1] - pts[k]) *
           (vortex_block_potential(pts[k], yc, theta, s) + vortex_block_potential(pts[k + 1], yc, theta, s));
  return sum;
}

/// int_a^b u(x, yc) dyc with 0 <= a <= b <= s.
inline double block_column_integral(double x, double a, double b, double theta, double s) {
  if (b <= a) return 0.0;
  if (x >= s) return 0.5 * (b * b - a * a) + x * (b - a);
  const double lin = (1.0 - 2.0 * theta) * 0.5 * (b * b - a * a) + x * (b - a);
  if (x <= a) return lin;
  // 2 theta int (x - y) y / (s - y) dy on [a, min(b, x)]
  const double top = std::min(b, x);
  auto F = [&](double y) {
    const double t = s - y;
    return -((x - s) * s * std::log(t) + (2.0 * s - x) * t - 0.5 * t * t);
  };
  return lin + 2.0 * theta * (F(top) - F(a));
}

} // namespace detail

/// Exact average of the block gradient over [x0,x1] x [y0,y1] (block coordinates, periodic
/// in y with period s), via the divergence theorem applied block by block.
inline Vec2 vortex_block_average(double x0, double x1, double y0, double y1, double theta, double s) {
  const double area = (x1 - x0) * (y1 - y0);
  if (x1 <= 0.0) return {1.0, 1.0 - 2.0 * theta};
  if (x0 >= s) return {1.0, 1.0};
  const double k0 = std::floor(y0 / s);
  double d1 = 0.0, d2 = 0.0;
  for (double k = k0; k * s < y1; k += 1.0) {
    const double a = std::clamp(y0 - k * s, 0.0, s);
    const double b = std::clamp(y1 - k * s, 0.0, s);
    if (b - a <= 1e-14 * s) continue;
    d1 += detail::block_column_integral(x1, a, b, theta, s) - detail::block_column_integral(x0, a, b, theta, s);
    d2 += detail::block_row_integral(b, x0, x1, theta, s) - detail::block_row_integral(a, x0, x1, theta, s);
  }
  return {d1 / area, d2 / area};
}

namespace detail {

/// Samples of rho_eps * (periodized block gradient) at the cell centers, with the block
/// gradient replaced by its cell averages so the 1/r singularity is integrated exactly.
inline VectorField2D vortex_field(const ScalingParams& p, const GridSpec& g, const VortexLayout& lay) {
  const MollifierSpec m(p.eps);
  const double h = g.h();
  const Stencil st = mollifier_stencil(m, h);
  const double s = lay.spacing;
  const int R = st.radius;
  const Point c0 = g.center(0, 0);
  const Vec2 left{1.0, 1.0 - 2.0 * p.theta}, right{1.0, 1.0};
  // cell averages on the grid padded by R; block coordinates put our atoms at x = s
  const int ax = g.nx() + 2 * R, ay = g.ny() + 2 * R;
  std::vector<Vec2> avg(static_cast<std::size_t>(ax) * ay);
  for (int j = 0; j < ay; ++j) {
    const double by = c0.y + (j - R) * h - lay.phase + s;
    for (int i = 0; i < ax; ++i) {
      const double bx = c0.x + (i - R) * h - s;
      avg[static_cast<std::size_t>(j) * ax + i] =
          vortex_block_average(bx - 0.5 * h, bx + 0.5 * h, by - 0.5 * h, by + 0.5 * h, p.theta, s);
    }
  }
  const double reach = (R + 1) * h;
  VectorField2D f(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double bx = c0.x + i * h - s;
      if (bx < -reach) {
        f(i, j) = left;
        continue;
      }
      if (bx > s + reach) {
        f(i, j) = right;
        continue;
      }
      Vec2 acc{};
      for (std::size_t q = 0; q < st.w.size(); ++q)
        acc = acc + st.w[q] * avg[static_cast<std::size_t>(j + R - st.dj[q]) * ax + (i + R - st.di[q])];
      f(i, j) = acc;
    }
  return f;
}

/// Declared curl tolerance of the vortex array, C (h/eps) sigma/eps^2 with C fixed by a
/// grid-refinement study (see tests).
inline double vortex_curl_tolerance(const ScalingParams& p, double h) {
  constexpr double C = 80.0;
  return C * (h / p.eps) * p.sigma / (p.eps * p.eps);
}

} // namespace detail

/// Mollified vortex array on a full grid over the unit square.
inline Competitor build_vortex_array(const ScalingParams& p, const GridSpec& g) {
  const VortexLayout lay = vortex_layout(p, g.h());
  require_resolved(g, p.eps, "build_vortex_array");
  VectorField2D f = detail::vortex_field(p, g, lay);
  VorticityMeasure mu(p.sigma, p.eps, lay.atoms_in_domain, g.domain());
  const int count = static_cast<int>(lay.atoms_in_domain.size());
  return Competitor{CompetitorKind::vortex_array, std::move(f), std::move(mu), p,
                    detail::vortex_curl_tolerance(p, g.h()), count, 0, std::nullopt};
}

/// One vertical period of the vortex array, [0, X] x [phase - s/2, phase + s/2] with
/// X just past the region where the field differs from (1,1). h = s / N_s <= eps/resolution
/// with N_s even, so that no sample lands on an atom. Energies over the unit square are
/// assembled by competitor_energy.
inline Competitor build_vortex_tile(const ScalingParams& p, int resolution = 16) {
  if (resolution < 8) throw GridError("build_vortex_tile: resolution must be >= 8 cells per eps");
  p.validate();
  const double s = p.sigma / (2.0 * p.theta);
  int rows = static_cast<int>(std::ceil(s * resolution / p.eps));
  if (rows % 2) ++rows;
  const double h = s / rows;
  const VortexLayout lay = vortex_layout(p, h);
  const long phase_nodes = std::lround(lay.phase / h);
  const long start_nodes = phase_nodes - rows / 2;
  const int full_cols = static_cast<int>(std::lround(1.0 / h));
  const int cols =
      std::min(full_cols, static_cast<int>(std::ceil((lay.x_atom + p.eps) / h)) + 2);
  const GridSpec g = GridSpec::with_spacing({0.0, start_nodes * h}, h, cols, rows);
  VectorField2D f = detail::vortex_field(p, g, lay);
  const Point atom{lay.x_atom, start_nodes * h + 0.5 * s};
  VorticityMeasure mu(p.sigma, p.eps, {{atom, 1}}, g.domain());
  long off = start_nodes % rows;
  if (off < 0) off += rows;
  return Competitor{CompetitorKind::vortex_array,
                    std::move(f),
                    std::move(mu),
                    p,
                    detail::vortex_curl_tolerance(p, h),
                    static_cast<int>(lay.atoms_in_domain.size()),
                    0,
                    PeriodicRows{rows, static_cast<int>(off), 1.0}};
}

// ---------------------------------------------------------------------------------------
// energy and admissibility of a competitor

/// Energy over the unit square. Periodic tiles are unrolled row by row; a final partial
/// row is weighted by its covered fraction.
inline EnergyBreakdown competitor_energy(EnergyKind kind, const Competitor& c) {
  const double sigma = c.params.sigma;
  if (!c.tiling) return energy(kind, c.field, sigma);
  const VectorField2D& f = c.field;
  const PeriodicRows& t = *c.tiling;
  const int nx = f.nx(), P = t.period_rows;
  const double h = f.h();
  std::vector<double> bulk(P, 0.0), horiz(P, 0.0), vert(P, 0.0);
  for (int r = 0; r < P; ++r) {
    const int up = (r + 1) % P;
    for (int i = 0; i < nx; ++i) {
      bulk[r] += eval_W(f(i, r)) * h * h;
      if (i + 1 < nx) horiz[r] += detail::edge_cost(kind, sigma, h, f(i, r), f(i + 1, r), true);
      vert[r] += detail::edge_cost(kind, sigma, h, f(i, r), f(i, up), false);
    }
  }
  const double rows_exact = t.domain_height / h;
  const int full = static_cast<int>(std::floor(rows_exact + 1e-9));
  const double frac = std::max(0.0, rows_exact - full);
  auto tile_row = [&](long J) {
    long r = (J - t.row_offset) % P;
    return static_cast<int>(r < 0 ? r + P : r);
  };
  EnergyBreakdown e;
  const int last = frac > 1e-9 ? full : full - 1;
  for (long J = 0; J <= last; ++J) {
    const double w = J < full ? 1.0 : frac;
    const int r = tile_row(J);
    e.bulk += w * bulk[r];
    e.regularizer += w * horiz[r];
    if (J < last) e.regularizer += (J + 1 < full ? 1.0 : frac) * vert[r];
  }
  e.total = e.bulk + e.regularizer;
  e.region = Rect::unit();
  return e;
}

struct AdmissibilityReport {
  double max_boundary_deviation = 0.0;
  double curl_residual = 0.0;
  bool measure_ok = true;
  std::string measure_message;
  bool theta_above_sigma = false;
  bool sigma_above_threshold = false;
  bool mollifier_resolved = false;
  bool passed = false;
};

/// Admissibility of a field against prescribed atoms: trace beta_2(0,.) = 1 - 2 theta,
/// discrete curl equal to the mollified measure, and measure invariants.
inline AdmissibilityReport admissibility_report(const VectorField2D& f, const ScalingParams& p,
                                                const std::vector<Atom>& atoms, double tol,
                                                std::optional<Rect> measure_domain = std::nullopt) {
  AdmissibilityReport r;
  const double target = 1.0 - 2.0 * p.theta;
  for (double v : left_boundary_trace(f))
    r.max_boundary_deviation = std::max(r.max_boundary_deviation, std::abs(v - target));
  r.theta_above_sigma = p.theta > p.sigma;
  r.sigma_above_threshold = p.sigma > std::numbers::sqrt2 * std::numbers::pi * p.eps * (1.0 - 1e-12);
  r.mollifier_resolved = f.h() <= p.eps / 8.0 * (1.0 + 1e-12);
  try {
    const VorticityMeasure mu(p.sigma, p.eps, atoms, measure_domain.value_or(f.spec().domain()));
    if (!mu.is_empty() && !r.mollifier_resolved) {
      r.measure_ok = false;
      r.measure_message = "mollifier not resolved by the grid";
    } else {
      r.curl_residual = curl_residual(f, mu);
    }
  } catch (const InputError& e) {
    r.measure_ok = false;
    r.measure_message = e.what();
  }
  r.passed = r.measure_ok && r.max_boundary_deviation <= tol && r.curl_residual <= tol;
  return r;
}

inline AdmissibilityReport admissibility_report(const Competitor& c, double tol) {
  return admissibility_report(c.field, c.params, c.measure.atoms(), tol, c.measure.domain());
}

inline AdmissibilityReport admissibility_report(const Competitor& c) {
  return admissibility_report(c, c.declared_tolerance);
}

} // namespace helix
