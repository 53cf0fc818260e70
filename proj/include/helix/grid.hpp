#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "helix/errors.hpp"

namespace helix {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

using Point = Vec2;

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  static constexpr Rect unit() { return {0.0, 0.0, 1.0, 1.0}; }

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return std::max(0.0, width()) * std::max(0.0, height()); }
  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  bool contains(const Rect& r) const {
    return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
  }

  /// Euclidean distance from p to the rectangle (0 inside).
  double distance_to(Point p) const {
    const double dx = std::max({x0 - p.x, 0.0, p.x - x1});
    const double dy = std::max({y0 - p.y, 0.0, p.y - y1});
    return std::hypot(dx, dy);
  }
};

/// Uniform grid of square cells of side h; values live at cell centers.
class GridSpec {
public:
  /// n x n cells over the unit square.
  explicit GridSpec(int n) : GridSpec(n, Rect::unit()) {}

  /// n cells along x over `domain`; the cell count along y follows from h.
  GridSpec(int n, const Rect& domain) : origin_{domain.x0, domain.y0}, nx_(n) {
    if (n < 2) throw ParameterError("GridSpec: need n >= 2, got " + std::to_string(n));
    if (!(domain.width() > 0.0) || !(domain.height() > 0.0))
      throw ParameterError("GridSpec: degenerate domain");
    h_ = domain.width() / n;
    const double rows = domain.height() / h_;
    ny_ = static_cast<int>(std::lround(rows));
    if (ny_ < 2 || std::abs(rows - ny_) > 1e-9 * std::max(1.0, rows))
      throw ParameterError("GridSpec: domain height is not a whole number of cells");
  }

  /// Explicit spacing and cell counts; used for strips and periodic tiles.
  static GridSpec with_spacing(Point origin, double h, int nx, int ny) {
    if (!(h > 0.0) || nx < 2 || ny < 2) throw ParameterError("GridSpec: bad spacing or counts");
    GridSpec g;
    g.origin_ = origin;
    g.h_ = h;
    g.nx_ = nx;
    g.ny_ = ny;
    return g;
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  Point origin() const { return origin_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }

  Rect domain() const {
    return {origin_.x, origin_.y, origin_.x + nx_ * h_, origin_.y + ny_ * h_};
  }
  Point center(int i, int j) const {
    return {origin_.x + (i + 0.5) * h_, origin_.y + (j + 0.5) * h_};
  }
  /// Lower-left corner of cell (i, j); also node (i, j) of the (nx+1) x (ny+1) node lattice.
  Point node(int i, int j) const { return {origin_.x + i * h_, origin_.y + j * h_}; }

  /// Column whose center is nearest to x (clamped).
  int nearest_column(double x) const {
    const int i = static_cast<int>(std::floor((x - origin_.x) / h_));
    return std::clamp(i, 0, nx_ - 1);
  }
  int nearest_row(double y) const {
    const int j = static_cast<int>(std::floor((y - origin_.y) / h_));
    return std::clamp(j, 0, ny_ - 1);
  }

private:
  GridSpec() = default;

  Point origin_{};
  double h_ = 0.0;
  int nx_ = 0;
  int ny_ = 0;
};

/// Sampled field beta: domain -> R^2 at cell centers, row-major in j.
class VectorField2D {
public:
  explicit VectorField2D(const GridSpec& spec, Vec2 fill = {})
      : spec_(spec), values_(spec.size(), fill) {}

  template <class F>
  static VectorField2D sample(const GridSpec& spec, F&& f) {
    VectorField2D out(spec);
    for (int j = 0; j < spec.ny(); ++j)
      for (int i = 0; i < spec.nx(); ++i) out(i, j) = f(spec.center(i, j));
    return out;
  }

  const GridSpec& spec() const { return spec_; }
  int nx() const { return spec_.nx(); }
  int ny() const { return spec_.ny(); }
  double h() const { return spec_.h(); }

  Vec2& operator()(int i, int j) { return values_[index(i, j)]; }
  const Vec2& operator()(int i, int j) const { return values_[index(i, j)]; }

  const std::vector<Vec2>& values() const { return values_; }

  bool all_finite() const {
    for (const auto& v : values_)
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) return false;
    return true;
  }

private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * spec_.nx() + i;
  }

  GridSpec spec_;
  std::vector<Vec2> values_;
};

} // namespace helix
