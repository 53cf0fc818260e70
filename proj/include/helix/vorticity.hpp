#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "helix/errors.hpp"
#include "helix/grid.hpp"
#include "helix/mollifier.hpp"

namespace helix {

struct Atom {
  Point x;
  int gamma = 1;  // +1 or -1
};

/// sigma * sum_i gamma_i delta_{x_i} * rho_eps, with B_eps(x_i) inside the domain and
/// pairwise disjoint. Invariants are enforced at construction.
class VorticityMeasure {
public:
  VorticityMeasure(double sigma, double eps, std::vector<Atom> atoms, Rect domain = Rect::unit())
      : sigma_(sigma), mollifier_(eps), atoms_(std::move(atoms)), domain_(domain) {
    if (!(sigma > 0.0)) throw ParameterError("VorticityMeasure: sigma must be positive");
    const double tol = 1e-12 * std::max(1.0, eps);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      const Atom& a = atoms_[i];
      if (a.gamma != 1 && a.gamma != -1)
        throw InputError("VorticityMeasure: atom " + std::to_string(i) + " has gamma not in {-1,+1}");
      if (a.x.x - eps < domain_.x0 - tol || a.x.x + eps > domain_.x1 + tol ||
          a.x.y - eps < domain_.y0 - tol || a.x.y + eps > domain_.y1 + tol)
        throw InputError("VorticityMeasure: B_eps of atom " + std::to_string(i) +
                         " is not contained in the domain");
      for (std::size_t j = 0; j < i; ++j)
        if (norm(a.x - atoms_[j].x) < 2.0 * eps - tol)
          throw InputError("VorticityMeasure: eps-balls of atoms " + std::to_string(j) + " and " +
                           std::to_string(i) + " intersect");
    }
  }

  /// Measure without atoms (curl-free fields).
  static VorticityMeasure empty(double sigma, double eps, Rect domain = Rect::unit()) {
    return VorticityMeasure(sigma, eps, {}, domain);
  }

  double sigma() const { return sigma_; }
  double eps() const { return mollifier_.eps; }
  const MollifierSpec& mollifier() const { return mollifier_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Rect& domain() const { return domain_; }
  bool is_empty() const { return atoms_.empty(); }

  double total_mass() const {
    int s = 0;
    for (const auto& a : atoms_) s += a.gamma;
    return sigma_ * s;
  }

  double density(Point p) const {
    double d = 0.0;
    for (const auto& a : atoms_) d += a.gamma * mollifier_value(mollifier_, p - a.x);
    return sigma_ * d;
  }

  double mass_in(const Rect& r) const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.gamma * mollifier_mass(mollifier_, a.x, r);
    return sigma_ * m;
  }

private:
  double sigma_;
  MollifierSpec mollifier_;
  std::vector<Atom> atoms_;
  Rect domain_;
};

/// Rectangle spanned by the centers of cells (i,j) and (i+1,j+1).
inline Rect dual_cell(const GridSpec& g, int i, int j) {
  const Point a = g.center(i, j);
  const Point b = g.center(i + 1, j + 1);
  return {a.x, a.y, b.x, b.y};
}

/// Counter-clockwise line integral of f around the loop through the centers of cells
/// (i,j), (i+1,j), (i+1,j+1), (i,j+1); edge values by averaging the two endpoints.
inline double cell_circulation(const VectorField2D& f, int i, int j) {
  if (i < 0 || j < 0 || i >= f.nx() - 1 || j >= f.ny() - 1)
    throw GridError("cell_circulation: bad cell address (" + std::to_string(i) + ", " +
                    std::to_string(j) + ")");
  const Vec2 a = f(i, j), b = f(i + 1, j), c = f(i + 1, j + 1), d = f(i, j + 1);
  return 0.5 * f.h() * ((a.x + b.x) + (b.y + c.y) - (c.x + d.x) - (d.y + a.y));
}

/// Precondition shared by everything that resolves a mollified measure on a grid.
inline void require_resolved(const GridSpec& g, double eps, const char* who) {
  if (g.h() > eps / 8.0 * (1.0 + 1e-12))
    throw GridError(std::string(who) + ": grid spacing h=" + std::to_string(g.h()) +
                    " does not resolve the mollifier (need h <= eps/8 = " +
                    std::to_string(eps / 8.0) + ")");
}

/// Per-dual-cell mass of the measure, laid out like the circulation array.
inline std::vector<double> dual_cell_masses(const GridSpec& g, const VorticityMeasure& mu) {
  const int mx = g.nx() - 1, my = g.ny() - 1;
  std::vector<double> mass(static_cast<std::size_t>(mx) * my, 0.0);
  const double r = mu.mollifier().support_radius();
  const double h = g.h();
  const Point c0 = g.center(0, 0);
  for (const auto& a : mu.atoms()) {
    const int i0 = std::max(0, static_cast<int>(std::floor((a.x.x - r - c0.x) / h)) - 1);
    const int i1 = std::min(mx - 1, static_cast<int>(std::floor((a.x.x + r - c0.x) / h)) + 1);
    const int j0 = std::max(0, static_cast<int>(std::floor((a.x.y - r - c0.y) / h)) - 1);
    const int j1 = std::min(my - 1, static_cast<int>(std::floor((a.x.y + r - c0.y) / h)) + 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        mass[static_cast<std::size_t>(j) * mx + i] +=
            mu.sigma() * a.gamma * mollifier_mass(mu.mollifier(), a.x, dual_cell(g, i, j));
  }
  return mass;
}

/// max over dual cells of |circulation - mass of mu in the cell| / h^2.
inline double curl_residual(const VectorField2D& f, const VorticityMeasure& mu) {
  if (!mu.is_empty()) require_resolved(f.spec(), mu.eps(), "curl_residual");
  const int mx = f.nx() - 1, my = f.ny() - 1;
  const auto mass = dual_cell_masses(f.spec(), mu);
  double worst = 0.0;
  for (int j = 0; j < my; ++j)
    for (int i = 0; i < mx; ++i) {
      const double d = cell_circulation(f, i, j) - mass[static_cast<std::size_t>(j) * mx + i];
      worst = std::max(worst, std::abs(d));
    }
  const double h = f.h();
  return worst / (h * h);
}

/// beta_2 on the left edge of the domain, one value per row, by linear extrapolation
/// from the first two columns.
inline std::vector<double> left_boundary_trace(const VectorField2D& f) {
  std::vector<double> out(f.ny());
  for (int j = 0; j < f.ny(); ++j) out[j] = 1.5 * f(0, j).y - 0.5 * f(1, j).y;
  return out;
}

struct RewriteSides {
  double lhs;
  double rhs;
};

/// Both sides of
///   int_{y1}^{y2} beta_2(x,t) dt - (1-2 theta)(y2-y1)
///     = int_0^x beta_1(s,y2) - beta_1(s,y1) ds + int_{(0,x)x(y1,y2)} curl beta
/// with x, y1, y2 snapped to interior cell faces; face values average the adjacent cells,
/// the curl integral uses the supplied density at cell centers.
inline RewriteSides rewrite_identity(const VectorField2D& f,
                                     const std::function<double(Point)>& curl_density,
                                     double theta, double x, double y1, double y2) {
  const GridSpec& g = f.spec();
  const double h = g.h();
  const Point o = g.origin();
  const int ix = static_cast<int>(std::lround((x - o.x) / h));
  const int j1 = static_cast<int>(std::lround((y1 - o.y) / h));
  const int j2 = static_cast<int>(std::lround((y2 - o.y) / h));
  if (ix < 1 || ix > g.nx() - 1 || j1 < 1 || j2 > g.ny() - 1 || j1 >= j2)
    throw GeometryError("rewrite_identity: x, y1, y2 must sit on interior faces with y1 < y2");

  double lhs = 0.0;
  for (int j = j1; j < j2; ++j) lhs += 0.5 * (f(ix - 1, j).y + f(ix, j).y) * h;
  lhs -= (1.0 - 2.0 * theta) * (j2 - j1) * h;

  double rhs = 0.0;
  for (int i = 0; i < ix; ++i) {
    const double top = 0.5 * (f(i, j2 - 1).x + f(i, j2).x);
    const double bottom = 0.5 * (f(i, j1 - 1).x + f(i, j1).x);
    rhs += (top - bottom) * h;
  }
  for (int j = j1; j < j2; ++j)
    for (int i = 0; i < ix; ++i) rhs += curl_density(g.center(i, j)) * h * h;
  return {lhs, rhs};
}

} // namespace helix
