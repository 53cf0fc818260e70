#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "helix/energy.hpp"
#include "helix/errors.hpp"
#include "helix/grid.hpp"
#include "helix/vorticity.hpp"

namespace helix {

/// Spins on eps Z^2 cap [0,1)^2, m = 1/eps sites per side, stored as angles.
class SpinField {
public:
  SpinField(int m, double fill = 0.0) : m_(m), angle_(static_cast<std::size_t>(m) * m, fill) {
    if (m < 3) throw ParameterError("SpinField: need m >= 3");
  }

  int m() const { return m_; }
  double eps() const { return 1.0 / m_; }
  double& operator()(int i, int j) { return angle_[static_cast<std::size_t>(j) * m_ + i]; }
  double operator()(int i, int j) const { return angle_[static_cast<std::size_t>(j) * m_ + i]; }

  void rotate(double phi) {
    for (auto& a : angle_) a += phi;
  }

private:
  int m_;
  std::vector<double> angle_;
};

struct ModelParams {
  double alpha;
  double eps;

  ModelParams(double alpha_, double eps_) : alpha(alpha_), eps(eps_) {
    if (!(alpha_ > 0.0) || !(alpha_ < 4.0)) throw ParameterError("ModelParams: alpha must lie in (0,4)");
    if (!(eps_ > 0.0)) throw ParameterError("ModelParams: eps must be positive");
  }

  double delta() const { return (4.0 - alpha) / 4.0; }
  double sigma() const { return eps / std::sqrt(2.0 * delta()); }
  double optimal_angle() const { return std::acos(alpha / 4.0); }
};

/// -alpha sum_{nn} u.u + sum_{second neighbours in rows/columns} u.u, each pair once,
/// pairs inside the box only.
inline double spin_energy(const SpinField& s, double alpha) {
  const int m = s.m();
  double nn = 0.0, nnn = 0.0;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      if (i + 1 < m) nn += std::cos(s(i + 1, j) - s(i, j));
      if (j + 1 < m) nn += std::cos(s(i, j + 1) - s(i, j));
      if (i + 2 < m) nnn += std::cos(s(i + 2, j) - s(i, j));
      if (j + 2 < m) nnn += std::cos(s(i, j + 2) - s(i, j));
    }
  return -alpha * nn + nnn;
}

struct RenormalizedEnergy {
  double squares;  // 1/2 sum over triples |u(j) - alpha/2 u(j+e) + u(j+2e)|^2
  double offset;   // 1/2 (2 + alpha^2/4) times the number of triples
  double value;    // squares - offset; equals F up to row/column end terms
  long triples;
};

inline double triple_square(double a0, double a1, double a2, double alpha) {
  const double x = std::cos(a0) - 0.5 * alpha * std::cos(a1) + std::cos(a2);
  const double y = std::sin(a0) - 0.5 * alpha * std::sin(a1) + std::sin(a2);
  return x * x + y * y;
}

inline RenormalizedEnergy renormalized_energy(const SpinField& s, double alpha) {
  if (!(alpha > 0.0) || alpha > 4.0) throw ParameterError("renormalized_energy: alpha must lie in (0,4]");
  const int m = s.m();
  double sq = 0.0;
  long count = 0;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i + 2 < m; ++i) {
      sq += triple_square(s(i, j), s(i + 1, j), s(i + 2, j), alpha);
      sq += triple_square(s(j, i), s(j, i + 1), s(j, i + 2), alpha);
      count += 2;
    }
  RenormalizedEnergy r;
  r.squares = 0.5 * sq;
  r.offset = 0.5 * count * (2.0 + 0.25 * alpha * alpha);
  r.value = r.squares - r.offset;
  r.triples = count;
  return r;
}

/// u(i,j) at angle (chi_row i + chi_col j) arccos(alpha/4).
inline SpinField build_spiral(const ModelParams& p, int m, int chi_row, int chi_col) {
  if ((chi_row != 1 && chi_row != -1) || (chi_col != 1 && chi_col != -1))
    throw ParameterError("build_spiral: chirality must be +1 or -1");
  SpinField s(m);
  const double phi = p.optimal_angle();
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) s(i, j) = (chi_row * i + chi_col * j) * phi;
  return s;
}

/// Angle in [0, pi] of the single-angle spiral family minimizing the interior squares,
/// found by scanning with the given step.
inline double best_spiral_angle(double alpha, int m, double step) {
  double best = 0.0, best_value = INFINITY;
  const int count = static_cast<int>(std::floor(std::numbers::pi / step));
  for (int k = 0; k <= count; ++k) {
    const double phi = k * step;
    SpinField s(m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) s(i, j) = (i + j) * phi;
    const double v = renormalized_energy(s, alpha).squares;
    if (v < best_value) {
      best_value = v;
      best = phi;
    }
  }
  return best;
}

struct AngleFields {
  int m;
  std::vector<double> hor;  // (m-1) x m, index j*(m-1)+i: angle from (i,j) to (i+1,j)
  std::vector<double> ver;  // m x (m-1), index j*m+i: angle from (i,j) to (i,j+1)

  double theta_hor(int i, int j) const { return hor[static_cast<std::size_t>(j) * (m - 1) + i]; }
  double theta_ver(int i, int j) const { return ver[static_cast<std::size_t>(j) * m + i]; }
};

namespace detail {

/// Representative of a in (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

} // namespace detail

/// Signed rotation angles between neighbouring spins, in (-pi, pi].
inline AngleFields extract_angles(const SpinField& s) {
  const int m = s.m();
  AngleFields a{m, std::vector<double>(static_cast<std::size_t>(m - 1) * m),
                std::vector<double>(static_cast<std::size_t>(m) * (m - 1))};
  std::string bad;
  int nbad = 0;
  auto check = [&](double d, int i, int j, const char* dir) {
    if (std::abs(d) > std::numbers::pi - 1e-12) {
      if (nbad++ < 8) bad += " (" + std::to_string(i) + "," + std::to_string(j) + "," + dir + ")";
    }
  };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i + 1 < m; ++i) {
      const double d = detail::wrap_angle(s(i + 1, j) - s(i, j));
      check(d, i, j, "hor");
      a.hor[static_cast<std::size_t>(j) * (m - 1) + i] = d;
    }
  for (int j = 0; j + 1 < m; ++j)
    for (int i = 0; i < m; ++i) {
      const double d = detail::wrap_angle(s(i, j + 1) - s(i, j));
      check(d, i, j, "ver");
      a.ver[static_cast<std::size_t>(j) * m + i] = d;
    }
  if (nbad > 0)
    throw InputError("extract_angles: " + std::to_string(nbad) + " antipodal neighbour pair(s):" + bad);
  return a;
}

struct PlaquetteVortex {
  int i, j;    // lower-left site of the plaquette
  int charge;  // +1 or -1
};

inline std::vector<PlaquetteVortex> detect_vortices(const AngleFields& a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<PlaquetteVortex> out;
  for (int j = 0; j + 1 < a.m; ++j)
    for (int i = 0; i + 1 < a.m; ++i) {
      const double c = a.theta_hor(i, j) + a.theta_ver(i + 1, j) - a.theta_hor(i, j + 1) - a.theta_ver(i, j);
      const double k = std::round(c / two_pi);
      if (std::abs(c - k * two_pi) > 1e-9 || std::abs(k) > 1.0)
        throw ConsistencyError("detect_vortices: plaquette (" + std::to_string(i) + "," +
                               std::to_string(j) + ") has circulation " + std::to_string(c));
      if (k != 0.0) out.push_back({i, j, static_cast<int>(k)});
    }
  return out;
}

enum class VortexMass { two_pi_sigma, sigma };

struct ContinuumImage {
  VectorField2D field;
  double sigma;
  VorticityMeasure measure;
};

/// beta = (theta_hor, theta_ver)/sqrt(2 delta) averaged onto the (m-1)^2 plaquettes of the
/// lattice, which become the cells (side eps) of the continuum grid over [0,(m-1)eps]^2.
/// Vortices become atoms at plaquette centers; their mollifier has scale eps/2 so that
/// atoms in neighbouring plaquettes keep disjoint balls.
inline ContinuumImage to_continuum(const SpinField& s, const ModelParams& p,
                                   VortexMass mass = VortexMass::two_pi_sigma) {
  if (std::abs(p.eps * s.m() - 1.0) > 1e-9)
    throw ParameterError("to_continuum: model eps does not match the lattice spacing 1/m");
  const AngleFields a = extract_angles(s);
  const auto vortices = detect_vortices(a);
  const int m = s.m();
  const double eps = p.eps;
  const double k = 1.0 / std::sqrt(2.0 * p.delta());
  const GridSpec g = GridSpec::with_spacing({0.0, 0.0}, eps, m - 1, m - 1);
  VectorField2D f(g);
  for (int j = 0; j + 1 < m; ++j)
    for (int i = 0; i + 1 < m; ++i)
      f(i, j) = {0.5 * k * (a.theta_hor(i, j) + a.theta_hor(i, j + 1)),
                 0.5 * k * (a.theta_ver(i, j) + a.theta_ver(i + 1, j))};
  std::vector<Atom> atoms;
  for (const auto& v : vortices) atoms.push_back({g.center(v.i, v.j), v.charge});
  const double sigma = p.sigma();
  const double strength = mass == VortexMass::two_pi_sigma ? 2.0 * std::numbers::pi * sigma : sigma;
  return {std::move(f), sigma, VorticityMeasure(strength, 0.5 * eps, std::move(atoms), g.domain())};
}

struct ConsistencyReport {
  double discrete;        // eps^2 times the interior squares, i.e. eps^2 (I - min I)
  double continuum;       // 2 delta^2 E^A(beta) of the continuum image
  double relative_error;  // |discrete - continuum| / continuum
};

inline ConsistencyReport continuum_consistency(const SpinField& s, const ModelParams& p) {
  const double discrete = p.eps * p.eps * renormalized_energy(s, p.alpha).squares;
  const ContinuumImage img = to_continuum(s, p);
  const double d = p.delta();
  const double continuum = 2.0 * d * d * energy(EnergyKind::EA, img.field, img.sigma).total;
  return {discrete, continuum, std::abs(discrete - continuum) / continuum};
}

} // namespace helix
