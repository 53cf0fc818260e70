#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "helix/balls.hpp"
#include "helix/constructions.hpp"
#include "helix/energy.hpp"
#include "helix/errors.hpp"
#include "helix/scaling.hpp"
#include "helix/vorticity.hpp"

namespace helix {

inline std::optional<CompetitorKind> parse_competitor(std::string_view s) {
  if (s == "uniform") return CompetitorKind::uniform;
  if (s == "branching") return CompetitorKind::branching;
  if (s == "vortex" || s == "vortex_array") return CompetitorKind::vortex_array;
  return std::nullopt;
}

enum class EpsRule { proportional, fixed };

struct SweepConfig {
  std::vector<double> theta_list;
  /// Shared sigma values; ignored when sigma_auto_points > 0.
  std::vector<double> sigma_list;
  /// When > 0, each theta gets this many log-spaced sigma values spanning
  /// sigma_auto_decades centred on the crossover theta^2 = sigma(|log sigma|/|log theta|+1).
  int sigma_auto_points = 0;
  double sigma_auto_decades = 2.0;
  EpsRule eps_rule = EpsRule::proportional;
  double kappa = 0.1;
  std::vector<double> eps_list;
  std::optional<int> grid_n;
  std::vector<EnergyKind> energies{EnergyKind::E1};
  std::vector<CompetitorKind> competitors{CompetitorKind::uniform, CompetitorKind::branching,
                                          CompetitorKind::vortex_array};
  int vortex_resolution = 16;
  VortexLog vortex_log = VortexLog::abs_log_theta;
  bool timing = false;
  std::string output;
  std::string format = "csv";
};

struct SweepPoint {
  double sigma, theta, eps;
};

struct SweepRecord {
  double sigma = 0, theta = 0, eps = 0;
  std::string competitor;
  std::string energy_kind;
  double bulk = 0, regularizer = 0, total = 0;
  double s_value = 0, ratio = 0;
  int grid_n = 0;
  double runtime_ms = 0;
  bool skipped = false;
  std::string note;  // reason for skipping; not serialized
};

/// The sigma at which theta^2 equals the branching term (the latter is increasing on (0, 1/e)).
inline double uniform_branching_crossover(double theta) {
  const double lt = std::abs(std::log(theta));
  auto f = [&](double s) { return s * (std::abs(std::log(s)) / lt + 1.0) - theta * theta; };
  double lo = 1e-300, hi = std::exp(-1.0);
  if (f(hi) < 0.0) return hi;
  for (int k = 0; k < 200; ++k) {
    const double mid = std::sqrt(lo * hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

inline int default_grid_n(double eps) {
  return std::min(2048, std::max(256, static_cast<int>(std::ceil(8.0 / eps - 1e-9))));
}

inline std::vector<double> logspace(double a, double b, int count) {
  std::vector<double> out;
  if (count == 1) return {a};
  for (int k = 0; k < count; ++k)
    out.push_back(std::exp(std::log(a) + (std::log(b) - std::log(a)) * k / (count - 1)));
  return out;
}

inline std::vector<SweepPoint> sweep_points(const SweepConfig& cfg) {
  std::vector<SweepPoint> pts;
  for (double theta : cfg.theta_list) {
    std::vector<double> sigmas = cfg.sigma_list;
    if (cfg.sigma_auto_points > 0) {
      const double c = uniform_branching_crossover(theta);
      const double half = std::pow(10.0, 0.5 * cfg.sigma_auto_decades);
      sigmas = logspace(c / half, c * half, cfg.sigma_auto_points);
    }
    for (double sigma : sigmas) {
      if (cfg.eps_rule == EpsRule::proportional) {
        pts.push_back({sigma, theta, cfg.kappa * sigma});
      } else {
        for (double eps : cfg.eps_list) pts.push_back({sigma, theta, eps});
      }
    }
  }
  return pts;
}

inline void validate(const SweepConfig& cfg) {
  if (cfg.eps_rule == EpsRule::proportional &&
      !(cfg.kappa > 0.0 && cfg.kappa < 1.0 / (std::numbers::sqrt2 * std::numbers::pi)))
    throw ParameterError("sweep config: kappa must lie in (0, 1/(sqrt(2) pi))");
  if (cfg.grid_n && *cfg.grid_n < 2) throw ParameterError("sweep config: grid_n must be >= 2");
  if (cfg.format != "csv" && cfg.format != "json")
    throw ParameterError("sweep config: format must be csv or json");
  for (const auto& pt : sweep_points(cfg)) ScalingParams{pt.sigma, pt.theta, pt.eps}.validate();
}

/// Default sweep: theta in {0.05, 0.1, 0.25, 0.5}, nine sigma values per theta over two
/// decades around the uniform/branching crossover, eps = sigma/10, E1.
inline SweepConfig default_sweep_config() {
  SweepConfig cfg;
  cfg.theta_list = {0.05, 0.1, 0.25, 0.5};
  cfg.sigma_auto_points = 9;
  cfg.sigma_auto_decades = 2.0;
  cfg.kappa = 0.1;
  return cfg;
}

inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig cfg;
  cfg.competitors.clear();
  cfg.energies.clear();
  try {
    cfg.theta_list = j.at("theta").get<std::vector<double>>();
    if (j.contains("sigma")) cfg.sigma_list = j.at("sigma").get<std::vector<double>>();
    if (j.contains("sigma_auto")) {
      cfg.sigma_auto_points = j.at("sigma_auto").value("points", 9);
      cfg.sigma_auto_decades = j.at("sigma_auto").value("decades", 2.0);
    }
    if (cfg.sigma_list.empty() && cfg.sigma_auto_points == 0)
      throw ParameterError("sweep config: need \"sigma\" or \"sigma_auto\"");
    if (j.contains("eps")) {
      const auto& e = j.at("eps");
      const std::string rule = e.value("rule", "proportional");
      if (rule == "proportional") {
        cfg.eps_rule = EpsRule::proportional;
        cfg.kappa = e.value("kappa", 0.1);
      } else if (rule == "fixed") {
        cfg.eps_rule = EpsRule::fixed;
        cfg.eps_list = e.at("values").get<std::vector<double>>();
      } else {
        throw ParameterError("sweep config: unknown eps rule '" + rule + "'");
      }
    }
    if (j.contains("grid_n") && !j.at("grid_n").is_null()) cfg.grid_n = j.at("grid_n").get<int>();
    for (const auto& s : j.value("energies", std::vector<std::string>{"E1"})) {
      auto k = parse_energy_kind(s);
      if (!k) throw ParameterError("sweep config: unknown energy '" + s + "'");
      cfg.energies.push_back(*k);
    }
    for (const auto& s :
         j.value("competitors", std::vector<std::string>{"uniform", "branching", "vortex"})) {
      auto k = parse_competitor(s);
      if (!k) throw ParameterError("sweep config: unknown competitor '" + s + "'");
      cfg.competitors.push_back(*k);
    }
    cfg.vortex_resolution = j.value("vortex_resolution", 16);
    if (j.value("vortex_log", std::string("abs_log_theta")) == "log_sigma_over_eps_theta")
      cfg.vortex_log = VortexLog::log_sigma_over_eps_theta;
    cfg.timing = j.value("timing", false);
    cfg.output = j.value("output", std::string{});
    cfg.format = j.value("format", std::string("csv"));
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("sweep config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

namespace detail {

inline bool inadmissible(const Competitor& c, std::string& why) {
  const AdmissibilityReport r = admissibility_report(c);
  if (r.passed) return false;
  std::ostringstream os;
  os << "inadmissible: trace deviation " << r.max_boundary_deviation << ", curl residual "
     << r.curl_residual << " (tolerance " << c.declared_tolerance << ")";
  if (!r.measure_ok) os << ", " << r.measure_message;
  why = os.str();
  return true;
}

/// Lowest-energy branching competitor over all level counts the grid carries.
inline std::optional<EnergyBreakdown> best_branching(const ScalingParams& p, const GridSpec& g,
                                                     EnergyKind kind, std::string& why) {
  BranchingOptions opt;
  if (kind != EnergyKind::E1) opt.smoothing = p.sigma;
  const int top = max_branching_levels(p, g, opt);
  if (top == 0) {
    why = "grid too coarse for one branching generation";
    return std::nullopt;
  }
  std::optional<EnergyBreakdown> best;
  for (int levels = 1; levels <= top; ++levels) {
    const Competitor c = build_branching(p, g, levels, opt);
    if (inadmissible(c, why)) return std::nullopt;
    const EnergyBreakdown e = competitor_energy(kind, c);
    if (!best || e.total < best->total) best = e;
  }
  return best;
}

inline std::vector<SweepRecord> evaluate_point(const SweepConfig& cfg, const SweepPoint& pt) {
  const ScalingParams p{pt.sigma, pt.theta, pt.eps};
  const double s = scaling_s(p, cfg.vortex_log);
  const int n = cfg.grid_n.value_or(default_grid_n(pt.eps));
  const GridSpec g(n);
  std::vector<SweepRecord> out;

  struct Built {
    CompetitorKind kind;
    std::optional<Competitor> c;
    std::string why;
  };
  std::vector<Built> cache;
  for (CompetitorKind k : cfg.competitors) {
    if (k == CompetitorKind::branching) continue;  // built per energy kind
    Built b{k, std::nullopt, {}};
    try {
      b.c = k == CompetitorKind::uniform ? build_uniform(p, GridSpec(std::min(n, 256)))
                                         : build_vortex_tile(p, cfg.vortex_resolution);
      if (inadmissible(*b.c, b.why)) b.c.reset();
    } catch (const RegimeError& e) {
      b.why = e.what();
    } catch (const GridError& e) {
      b.why = e.what();
    } catch (const GeometryError& e) {
      b.why = e.what();
    }
    cache.push_back(std::move(b));
  }

  for (EnergyKind kind : cfg.energies) {
    std::optional<SweepRecord> best;
    for (CompetitorKind k : cfg.competitors) {
      const auto t0 = std::chrono::steady_clock::now();
      SweepRecord r;
      r.sigma = pt.sigma;
      r.theta = pt.theta;
      r.eps = pt.eps;
      r.competitor = to_string(k);
      r.energy_kind = std::string(to_string(kind));
      r.s_value = s;
      r.grid_n = n;
      std::optional<EnergyBreakdown> e;
      if (k == CompetitorKind::branching) {
        try {
          e = best_branching(p, g, kind, r.note);
        } catch (const GridError& ex) {
          r.note = ex.what();
        }
      } else {
        for (const auto& b : cache)
          if (b.kind == k) {
            if (b.c) {
              e = competitor_energy(kind, *b.c);
              r.grid_n = k == CompetitorKind::uniform ? b.c->field.nx()
                                                      : static_cast<int>(std::lround(1.0 / b.c->field.h()));
            } else {
              r.note = b.why;
            }
          }
      }
      if (e) {
        r.bulk = e->bulk;
        r.regularizer = e->regularizer;
        r.total = e->total;
        r.ratio = r.total / s;
      } else {
        r.skipped = true;
        r.bulk = r.regularizer = r.total = r.ratio = std::numeric_limits<double>::quiet_NaN();
      }
      if (cfg.timing)
        r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      if (!r.skipped && (!best || r.total < best->total)) best = r;
      out.push_back(std::move(r));
    }
    if (best) {
      SweepRecord b = *best;
      b.competitor = "best";
      b.note = best->competitor;
      b.runtime_ms = 0.0;
      out.push_back(std::move(b));
    }
  }
  return out;
}

inline int thread_cap() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("HELIX_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

} // namespace detail

/// Records in config order: theta, sigma (and eps), energy kind, competitor, then "best".
/// "best" rows carry the winning competitor in `note`.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  if (cfg.competitors.empty() || cfg.energies.empty()) return {};
  const auto pts = sweep_points(cfg);
  std::vector<std::vector<SweepRecord>> parts(pts.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < pts.size(); k = next++) parts[k] = detail::evaluate_point(cfg, pts[k]);
  };
  const int threads = std::min<int>(detail::thread_cap(), static_cast<int>(pts.size()));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::vector<SweepRecord> out;
  for (auto& p : parts)
    for (auto& r : p) out.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------------------------------
// fits

struct FitResult {
  double slope;
  double intercept;
  double stderr_slope;
  int n_points;
};

inline double record_field(const SweepRecord& r, std::string_view name) {
  if (name == "sigma") return r.sigma;
  if (name == "theta") return r.theta;
  if (name == "eps") return r.eps;
  if (name == "bulk") return r.bulk;
  if (name == "regularizer") return r.regularizer;
  if (name == "total") return r.total;
  if (name == "s_value") return r.s_value;
  if (name == "ratio") return r.ratio;
  if (name == "grid_n") return r.grid_n;
  if (name == "runtime_ms") return r.runtime_ms;
  throw ParameterError("fit_loglog: unknown field '" + std::string(name) + "'");
}

/// Least squares line through (ln x, ln y).
inline FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DataError("fit_loglog: size mismatch");
  const int n = static_cast<int>(x.size());
  if (n < 3) throw DataError("fit_loglog: need at least 3 points");
  double sx = 0, sy = 0;
  std::vector<double> lx(n), ly(n);
  for (int k = 0; k < n; ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw DataError("fit_loglog: nonpositive value");
    lx[k] = std::log(x[k]);
    ly[k] = std::log(y[k]);
    sx += lx[k];
    sy += ly[k];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (int k = 0; k < n; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  if (!(sxx > 0.0)) throw DataError("fit_loglog: x values are all equal");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (int k = 0; k < n; ++k) {
    const double d = ly[k] - (f.intercept + f.slope * lx[k]);
    sse += d * d;
  }
  f.stderr_slope = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
  f.n_points = n;
  return f;
}

inline FitResult fit_loglog(const std::vector<SweepRecord>& records, std::string_view x_field,
                            std::string_view y_field) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    x.push_back(record_field(r, x_field));
    y.push_back(record_field(r, y_field));
  }
  return fit_loglog(x, y);
}

// ---------------------------------------------------------------------------------------
// regimes

inline Regime regime_of(CompetitorKind k) {
  switch (k) {
    case CompetitorKind::uniform: return Regime::uniform;
    case CompetitorKind::branching: return Regime::branching;
    case CompetitorKind::vortex_array: return Regime::vortex;
  }
  return Regime::uniform;
}

/// True when the argmin term of s stays the same for all sigma within `decades` of the
/// point (eps moves with sigma under the proportional rule).
inline bool regime_interior(const SweepPoint& pt, bool eps_follows_sigma, double decades,
                            VortexLog log = VortexLog::abs_log_theta) {
  const Regime here = scaling_terms({pt.sigma, pt.theta, pt.eps}, log).argmin();
  for (int k = -16; k <= 16; ++k) {
    const double f = std::pow(10.0, decades * k / 16.0);
    const double eps = eps_follows_sigma ? pt.eps * f : pt.eps;
    const ScalingParams q{pt.sigma * f, pt.theta, eps};
    if (q.theta <= 0 || q.sigma < std::numbers::sqrt2 * std::numbers::pi * q.eps) continue;
    if (scaling_terms(q, log).argmin() != here) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------------------
// output

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const char* csv_header() {
  return "sigma,theta,eps,competitor,energy_kind,bulk,regularizer,total,s_value,ratio,grid_n,runtime_ms";
}

inline std::string to_csv(const std::vector<SweepRecord>& records) {
  std::string out = csv_header();
  out += '\n';
  for (const auto& r : records) {
    out += format_double(r.sigma) + ',' + format_double(r.theta) + ',' + format_double(r.eps) + ',' +
           r.competitor + ',' + r.energy_kind + ',' + format_double(r.bulk) + ',' +
           format_double(r.regularizer) + ',' + format_double(r.total) + ',' +
           format_double(r.s_value) + ',' + format_double(r.ratio) + ',' + std::to_string(r.grid_n) +
           ',' + format_double(r.runtime_ms) + '\n';
  }
  return out;
}

inline nlohmann::json to_json(const std::vector<SweepRecord>& records) {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records)
    arr.push_back({{"sigma", num(r.sigma)},
                   {"theta", num(r.theta)},
                   {"eps", num(r.eps)},
                   {"competitor", r.competitor},
                   {"energy_kind", r.energy_kind},
                   {"bulk", num(r.bulk)},
                   {"regularizer", num(r.regularizer)},
                   {"total", num(r.total)},
                   {"s_value", num(r.s_value)},
                   {"ratio", num(r.ratio)},
                   {"grid_n", r.grid_n},
                   {"runtime_ms", num(r.runtime_ms)}});
  return arr;
}

inline std::vector<SweepRecord> records_from_json(const nlohmann::json& arr) {
  auto num = [](const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  std::vector<SweepRecord> out;
  try {
    for (const auto& o : arr) {
      SweepRecord r;
      r.sigma = num(o.at("sigma"));
      r.theta = num(o.at("theta"));
      r.eps = num(o.at("eps"));
      r.competitor = o.at("competitor").get<std::string>();
      r.energy_kind = o.at("energy_kind").get<std::string>();
      r.bulk = num(o.at("bulk"));
      r.regularizer = num(o.at("regularizer"));
      r.total = num(o.at("total"));
      r.s_value = num(o.at("s_value"));
      r.ratio = num(o.at("ratio"));
      r.grid_n = o.at("grid_n").get<int>();
      r.runtime_ms = num(o.at("runtime_ms"));
      r.skipped = std::isnan(r.total);
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("records_from_json: ") + e.what());
  }
  return out;
}

/// JSON numbers use nlohmann's shortest round-trip form, which reproduces the doubles exactly.
inline void emit(const std::vector<SweepRecord>& records, const std::string& format,
                 const std::string& path) {
  std::string text;
  if (format == "csv") {
    text = to_csv(records);
  } else if (format == "json") {
    text = to_json(records).dump(2) + "\n";
  } else {
    throw ParameterError("emit: format must be csv or json");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path, "cannot open for writing");
  os << text;
  os.flush();
  if (!os) throw IoError(path, "write failed");
}

// ---------------------------------------------------------------------------------------
// inequality reports

/// sigma/(2 pi) x^perp/|x|^2 around `center`, sampled at cell centers.
inline VectorField2D canonical_vortex(const GridSpec& g, Point center, double sigma) {
  return VectorField2D::sample(g, [&](Point p) {
    const Vec2 d = p - center;
    const double r2 = dot(d, d);
    const double k = sigma / (2.0 * std::numbers::pi * r2);
    return Vec2{-k * d.y, k * d.x};
  });
}

struct InequalityRow {
  std::string name;  // core, annulus, tv_annulus, elliptic
  int atom = -1;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  /// Constant the ratio is compared with (NaN when the row is report-only).
  double reference = std::numeric_limits<double>::quiet_NaN();
};

struct InequalityGeometry {
  /// Annulus rows use these centers; by default the atoms, or the domain center if none.
  std::vector<Point> centers;
  /// Inner and outer radii; 0 picks eps (at least 4h) and the largest radius that keeps the
  /// annulus in the domain and away from other atoms.
  double r_inner = 0.0;
  double r_outer = 0.0;
  /// Nested rectangles for the elliptic row: inner, and the margin A around it.
  std::optional<Rect> elliptic_inner;
  double elliptic_margin = 0.0;
};

/// Line integral of f around the boundary of the dual cells with centers inside B_r(p).
inline double enclosed_circulation(const VectorField2D& f, Point p, double r) {
  const GridSpec& g = f.spec();
  double sum = 0.0;
  for (int j = 0; j + 1 < f.ny(); ++j)
    for (int i = 0; i + 1 < f.nx(); ++i) {
      const Point c = g.node(i + 1, j + 1);
      if (norm(c - p) <= r) sum += cell_circulation(f, i, j);
    }
  return sum;
}

inline std::vector<InequalityRow> inequality_report(const VectorField2D& f, const VorticityMeasure& mu,
                                                    const ScalingParams& p,
                                                    const InequalityGeometry& geo = {}) {
  std::vector<InequalityRow> rows;
  const GridSpec& g = f.spec();
  const Rect dom = g.domain();
  const double sigma = p.sigma;
  const double h = g.h();

  if (!mu.is_empty()) {
    const auto core = vortex_core_ratio(f, mu);
    const double rhs = std::pow(mu.sigma(), 4) / (mu.eps() * mu.eps());
    for (std::size_t k = 0; k < core.size(); ++k)
      rows.push_back({"core", static_cast<int>(k), core[k] * rhs, rhs, core[k],
                      5.0 / (64.0 * std::pow(std::numbers::pi, 3))});
  }

  std::vector<Point> centers = geo.centers;
  if (centers.empty()) {
    for (const auto& a : mu.atoms()) centers.push_back(a.x);
    if (centers.empty()) centers.push_back({0.5 * (dom.x0 + dom.x1), 0.5 * (dom.y0 + dom.y1)});
  }
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const Point c = centers[k];
    const double wall = std::min({c.x - dom.x0, dom.x1 - c.x, c.y - dom.y0, dom.y1 - c.y});
    double r = geo.r_inner > 0.0 ? geo.r_inner : std::max(p.eps, 4.0 * h);
    double R = geo.r_outer;
    if (R <= 0.0) {
      R = wall;
      for (const auto& a : mu.atoms())
        if (norm(a.x - c) > 0.0) R = std::min(R, 0.5 * norm(a.x - c));
    }
    if (!(r < R) || R > wall * (1.0 + 1e-12))
      throw ParameterError("inequality_report: annulus does not fit in the domain");
    const double curl = enclosed_circulation(f, c, r);
    const EnergyBreakdown e = annulus_energy(EnergyKind::E1, f, sigma, c, r, R);
    const double logr = std::log(R / r);
    const double annulus_rhs = sigma * std::abs(curl) * logr;
    rows.push_back({"annulus", static_cast<int>(k), e.total, annulus_rhs,
                    annulus_rhs > 0 ? e.total / annulus_rhs : std::numeric_limits<double>::infinity()});
    const double tv = e.regularizer / sigma;
    const double tv_rhs = std::abs(curl) * logr;
    rows.push_back({"tv_annulus", static_cast<int>(k), tv, tv_rhs,
                    tv_rhs > 0 ? tv / tv_rhs : std::numeric_limits<double>::infinity(), 1.0});
  }

  // |D beta|^2 on the inner rectangle against (d1 b1)^2 + (d2 b2)^2 + A^-2 |b|^2 + curl^2 on
  // the enlarged one.
  double A = geo.elliptic_margin > 0.0 ? geo.elliptic_margin : 0.125 * std::min(dom.width(), dom.height());
  Rect inner = geo.elliptic_inner.value_or(Rect{dom.x0 + A, dom.y0 + A, dom.x1 - A, dom.y1 - A});
  const Rect outer{inner.x0 - A, inner.y0 - A, inner.x1 + A, inner.y1 + A};
  if (!dom.contains(Rect{outer.x0 + 1e-12, outer.y0 + 1e-12, outer.x1 - 1e-12, outer.y1 - 1e-12}) ||
      !(inner.area() > 0.0))
    throw ParameterError("inequality_report: elliptic rectangles do not fit in the domain");
  const double full = energy(EnergyKind::E2, f, 1.0, inner).regularizer;
  const EnergyBreakdown aniso = energy(EnergyKind::EA, f, 1.0, outer);
  double mass = 0.0, curl2 = 0.0;
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i) {
      if (!outer.contains(g.center(i, j))) continue;
      mass += dot(f(i, j), f(i, j)) * h * h;
      if (i + 1 < f.nx() && j + 1 < f.ny() && outer.contains(g.center(i + 1, j + 1))) {
        const double c = cell_circulation(f, i, j);
        curl2 += c * c / (h * h);
      }
    }
  const double ell_rhs = aniso.regularizer + mass / (A * A) + curl2;
  rows.push_back({"elliptic", -1, full, ell_rhs, ell_rhs > 0 ? full / ell_rhs : 0.0});
  return rows;
}

} // namespace helix
