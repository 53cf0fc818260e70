#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "helix/energy.hpp"
#include "helix/errors.hpp"
#include "helix/grid.hpp"
#include "helix/vorticity.hpp"

namespace helix {

struct Ball {
  Point center;
  double radius;
  double charge = 0.0;
};

struct MergeEvent {
  double time;
  std::vector<int> merged;  // indices into the family just before the event
  int result;               // index of the new ball just after the event
};

/// Family right after an event (or at t = 0).
struct BallSnapshot {
  double time;
  std::vector<Ball> balls;
};

struct BallFamily {
  double time = 0.0;
  std::vector<Ball> balls;
  std::vector<MergeEvent> merge_log;
  double initial_radius_sum = 0.0;
  std::vector<BallSnapshot> history;
};

namespace detail {

/// Contact tolerance relative to the radii involved.
constexpr double kTouch = 1e-12;

inline bool touching(const Ball& a, const Ball& b) {
  return norm(a.center - b.center) <= (a.radius + b.radius) * (1.0 + kTouch);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

/// Merges touching clusters (transitive closure) until the closures are disjoint.
/// Returns true if anything merged.
inline bool merge_clusters(std::vector<Ball>& balls, double time, std::vector<MergeEvent>& log) {
  bool any = false;
  for (;;) {
    const int n = static_cast<int>(balls.size());
    UnionFind uf(n);
    bool found = false;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (touching(balls[i], balls[j])) {
          uf.unite(i, j);
          found = true;
        }
    if (!found) return any;
    any = true;
    std::vector<std::vector<int>> groups(n);
    for (int i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);
    std::vector<Ball> next;
    // Keep order by the smallest member so the result is deterministic.
    std::vector<int> firsts;
    for (int i = 0; i < n; ++i)
      if (!groups[i].empty()) firsts.push_back(i);
    std::sort(firsts.begin(), firsts.end(),
              [&](int a, int b) { return groups[a].front() < groups[b].front(); });
    for (int root : firsts) {
      const auto& g = groups[root];
      if (g.size() == 1) {
        next.push_back(balls[g.front()]);
        continue;
      }
      Ball b{{0.0, 0.0}, 0.0, 0.0};
      for (int k : g) {
        b.radius += balls[k].radius;
        b.center = b.center + balls[k].radius * balls[k].center;
        b.charge += balls[k].charge;
      }
      b.center = (1.0 / b.radius) * b.center;
      log.push_back({time, g, static_cast<int>(next.size())});
      next.push_back(b);
    }
    balls = std::move(next);
  }
}

} // namespace detail

/// Event-driven ball construction: all radii grow like e^t; on contact the touching
/// cluster is replaced by one ball with the summed radius centered at the radius-weighted
/// centroid, and merging repeats until the closures are disjoint.
inline BallFamily grow_balls(const std::vector<Ball>& initial, double t) {
  if (!(t >= 0.0)) throw ParameterError("grow_balls: t must be >= 0");
  for (std::size_t i = 0; i < initial.size(); ++i) {
    if (!(initial[i].radius > 0.0))
      throw InputError("grow_balls: ball " + std::to_string(i) + " has nonpositive radius");
    for (std::size_t j = 0; j < i; ++j) {
      const double d = norm(initial[i].center - initial[j].center);
      const double s = initial[i].radius + initial[j].radius;
      if (d < s * (1.0 - detail::kTouch))
        throw InputError("grow_balls: closures of balls " + std::to_string(j) + " and " +
                         std::to_string(i) + " overlap");
    }
  }
  BallFamily fam;
  fam.balls = initial;
  for (const auto& b : initial) fam.initial_radius_sum += b.radius;
  detail::merge_clusters(fam.balls, 0.0, fam.merge_log);
  fam.history.push_back({0.0, fam.balls});

  // Pair contact times. All radii scale alike between events, so the queue stays valid
  // until a merge renumbers the family; then it is rebuilt.
  struct Entry {
    double time;
    int i, j;
    bool operator>(const Entry& o) const { return time > o.time; }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  double now = 0.0;
  auto rebuild = [&] {
    queue = {};
    const int n = static_cast<int>(fam.balls.size());
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const Ball& a = fam.balls[i];
        const Ball& b = fam.balls[j];
        queue.push({now + std::log(norm(a.center - b.center) / (a.radius + b.radius)), i, j});
      }
  };
  rebuild();
  while (!queue.empty() && queue.top().time <= t) {
    const double when = queue.top().time;
    const double grow = std::exp(when - now);
    for (auto& b : fam.balls) b.radius *= grow;
    now = when;
    const std::size_t before = fam.merge_log.size();
    detail::merge_clusters(fam.balls, now, fam.merge_log);
    if (fam.merge_log.size() == before) {
      queue.pop();  // rounding left the pair a hair apart; it is picked up again below
      continue;
    }
    rebuild();
    fam.history.push_back({now, fam.balls});
  }
  const double grow = std::exp(t - now);
  for (auto& b : fam.balls) b.radius *= grow;
  fam.time = t;
  return fam;
}

/// Distinct positive merge times up to T.
inline std::vector<double> merge_times(const std::vector<Ball>& initial, double T) {
  const BallFamily fam = grow_balls(initial, T);
  std::vector<double> out;
  for (const auto& e : fam.merge_log)
    if (e.time > 0.0 && (out.empty() || e.time > out.back())) out.push_back(e.time);
  return out;
}

/// c sigma |charge| log(R/r).
inline double annulus_bound(double charge, double sigma, double r, double R, double c) {
  if (!(r > 0.0) || !(R > r)) throw ParameterError("annulus_bound: need 0 < r < R");
  if (!(c > 0.0) || !(sigma > 0.0)) throw ParameterError("annulus_bound: need c, sigma > 0");
  return c * sigma * std::abs(charge) * std::log(R / r);
}

/// Energy of the cells whose centers lie in the annulus r <= |x - center| <= R.
inline EnergyBreakdown annulus_energy(EnergyKind kind, const VectorField2D& f, double sigma,
                                      Point center, double r, double R) {
  const GridSpec& g = f.spec();
  return energy_masked(kind, f, sigma, [&](int i, int j) {
    const double d = norm(g.center(i, j) - center);
    return d >= r && d <= R;
  });
}

namespace detail {

/// Circulation around the square of half-width eps/2 around p (snapped to dual cells).
inline double local_circulation(const VectorField2D& f, Point p, double half) {
  const GridSpec& g = f.spec();
  const Point c0 = g.center(0, 0);
  const double h = g.h();
  const int i0 = std::max(0, static_cast<int>(std::floor((p.x - half - c0.x) / h)));
  const int i1 = std::min(f.nx() - 2, static_cast<int>(std::ceil((p.x + half - c0.x) / h)));
  const int j0 = std::max(0, static_cast<int>(std::floor((p.y - half - c0.y) / h)));
  const int j1 = std::min(f.ny() - 2, static_cast<int>(std::ceil((p.y + half - c0.y) / h)));
  double sum = 0.0;
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) sum += cell_circulation(f, i, j);
  return sum;
}

} // namespace detail

/// Per atom, int_{B_eps(x_i)} W(f) / (sigma^4 / eps^2).
inline std::vector<double> vortex_core_ratio(const VectorField2D& f, const VorticityMeasure& mu) {
  require_resolved(f.spec(), mu.eps(), "vortex_core_ratio");
  const double eps = mu.eps();
  const double sigma = mu.sigma();
  const GridSpec& g = f.spec();
  const double h = g.h();
  std::vector<double> out;
  for (std::size_t k = 0; k < mu.atoms().size(); ++k) {
    const Atom& a = mu.atoms()[k];
    const double circ = detail::local_circulation(f, a.x, 0.5 * eps);
    if (std::abs(circ - a.gamma * sigma) > 0.25 * sigma)
      throw InputError("vortex_core_ratio: field is not admissible near atom " + std::to_string(k) +
                       " (circulation " + std::to_string(circ) + ", expected " +
                       std::to_string(a.gamma * sigma) + ")");
    double w = 0.0;
    const int i0 = std::max(0, g.nearest_column(a.x.x - eps) - 1);
    const int i1 = std::min(g.nx() - 1, g.nearest_column(a.x.x + eps) + 1);
    const int j0 = std::max(0, g.nearest_row(a.x.y - eps) - 1);
    const int j1 = std::min(g.ny() - 1, g.nearest_row(a.x.y + eps) + 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        if (norm(g.center(i, j) - a.x) < eps) w += eval_W(f(i, j)) * h * h;
    out.push_back(w / (sigma * sigma * sigma * sigma / (eps * eps)));
  }
  return out;
}

struct LowerBoundReport {
  double T = 0.0;
  double enclosed_charge = 0.0;
  double bound = 0.0;
  double measured_energy = 0.0;
  std::optional<double> ratio;  // empty when the bound vanishes
  int atoms = 0;
  int final_balls = 0;
};

/// Logarithmic lower bound from the ball construction started at the atoms' eps-balls and
/// run to the largest T with eps n e^T <= d/2, d = dist(inner, boundary of outer).
inline LowerBoundReport vortex_lower_bound(const VectorField2D& f, const VorticityMeasure& mu,
                                           const Rect& inner, const Rect& outer, double c_bc) {
  if (!(c_bc > 0.0)) throw ParameterError("vortex_lower_bound: c_bc must be positive");
  if (!outer.contains(inner)) throw GeometryError("vortex_lower_bound: inner is not inside outer");
  const double d = std::min({inner.x0 - outer.x0, outer.x1 - inner.x1, inner.y0 - outer.y0,
                             outer.y1 - inner.y1});
  if (!(d > 0.0)) throw GeometryError("vortex_lower_bound: inner touches the boundary of outer");
  LowerBoundReport rep;
  rep.atoms = static_cast<int>(mu.atoms().size());
  rep.measured_energy = energy(EnergyKind::E1, f, mu.sigma(), outer).total;
  if (rep.atoms == 0) return rep;
  rep.T = std::log(d / (2.0 * mu.eps() * rep.atoms));
  if (!(rep.T > 0.0))
    throw GeometryError("vortex_lower_bound: vortices too crowded (T = " + std::to_string(rep.T) + ")");
  std::vector<Ball> init;
  for (const auto& a : mu.atoms()) init.push_back({a.x, mu.eps(), mu.sigma() * a.gamma});
  const BallFamily fam = grow_balls(init, rep.T);
  rep.final_balls = static_cast<int>(fam.balls.size());
  for (const auto& b : fam.balls)
    if (inner.distance_to(b.center) < b.radius) rep.enclosed_charge += b.charge;
  rep.bound = c_bc * mu.sigma() * rep.T * std::abs(rep.enclosed_charge);
  if (rep.bound > 0.0) rep.ratio = rep.measured_energy / rep.bound;
  return rep;
}

} // namespace helix
