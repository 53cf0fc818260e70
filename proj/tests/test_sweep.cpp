#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "helix/helix.hpp"

using namespace helix;
using nlohmann::json;

namespace {

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.theta_list = {0.25, 0.5};
  cfg.sigma_list = {0.004, 0.03};
  cfg.kappa = 0.1;
  cfg.grid_n = 512;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST(Config, DefaultSweepShape) {
  const auto cfg = default_sweep_config();
  const auto pts = sweep_points(cfg);
  ASSERT_EQ(pts.size(), 36u);
  for (const auto& p : pts) EXPECT_NEAR(p.eps, p.sigma / 10, 1e-15 * p.sigma);
  // two decades per theta, centred on the crossover
  EXPECT_NEAR(std::log10(pts[8].sigma / pts[0].sigma), 2.0, 1e-12);
  const double c = uniform_branching_crossover(0.05);
  EXPECT_NEAR(pts[4].sigma, c, 1e-12 * c);
  EXPECT_NEAR(c * (std::abs(std::log(c)) / std::abs(std::log(0.05)) + 1.0), 0.0025, 1e-12);
}

TEST(Config, FromJson) {
  const json j = json::parse(R"({"theta": [0.1], "sigma": [0.01, 0.02],
      "eps": {"rule": "fixed", "values": [0.001, 0.002]}, "grid_n": 300,
      "energies": ["E1", "EA"], "competitors": ["uniform"], "format": "json"})");
  const auto cfg = sweep_config_from_json(j);
  EXPECT_EQ(sweep_points(cfg).size(), 4u);
  EXPECT_EQ(*cfg.grid_n, 300);
  EXPECT_EQ(cfg.energies.size(), 2u);
  EXPECT_EQ(cfg.competitors.size(), 1u);
  EXPECT_EQ(cfg.format, "json");
}

TEST(Config, Rejections) {
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"theta": [0.1]})")), ParameterError);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"sigma": [0.1]})")), ParameterError);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"theta": [0.1], "sigma": [0.01], "competitors": ["x"]})")),
               ParameterError);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"theta": [0.7], "sigma": [0.01]})")), ParameterError);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"theta": [0.1], "sigma": [0.01], "eps": {"kappa": 0.5}})")),
               ParameterError);
}

TEST(Config, GridDefaults) {
  EXPECT_EQ(default_grid_n(0.1), 256);
  EXPECT_EQ(default_grid_n(0.01), 800);
  EXPECT_EQ(default_grid_n(1e-4), 2048);
}

TEST(Sweep, RecordsAndBestRows) {
  const auto recs = run_sweep(small_config());
  ASSERT_EQ(recs.size(), 4u * 4u);
  for (std::size_t k = 0; k < recs.size(); k += 4) {
    EXPECT_EQ(recs[k].competitor, "uniform");
    EXPECT_EQ(recs[k + 1].competitor, "branching");
    EXPECT_EQ(recs[k + 2].competitor, "vortex");
    EXPECT_EQ(recs[k + 3].competitor, "best");
    double best = INFINITY;
    for (int c = 0; c < 3; ++c)
      if (!recs[k + c].skipped) best = std::min(best, recs[k + c].total);
    EXPECT_EQ(recs[k + 3].total, best);
  }
  // uniform is 16 theta^2 (1 - theta)^2
  EXPECT_NEAR(recs[0].total, 16 * 0.0625 * 0.5625, 1e-12);
}

TEST(Sweep, SkipsOutOfRegimeVortex) {
  SweepConfig cfg = small_config();
  cfg.theta_list = {0.02};
  cfg.sigma_list = {0.03};
  const auto recs = run_sweep(cfg);
  ASSERT_EQ(recs[2].competitor, "vortex");
  EXPECT_TRUE(recs[2].skipped);
  EXPECT_TRUE(std::isnan(recs[2].total));
  EXPECT_NE(recs[2].note.find("theta > sigma"), std::string::npos);
}

TEST(Sweep, IndependentOfThreadCount) {
  const auto cfg = small_config();
  setenv("HELIX_THREADS", "1", 1);
  const std::string one = to_csv(run_sweep(cfg));
  unsetenv("HELIX_THREADS");
  const std::string many = to_csv(run_sweep(cfg));
  EXPECT_EQ(one, many);
}

TEST(Fit, RecoversPowerLaw) {
  std::vector<double> x, y;
  for (int k = 0; k < 10; ++k) {
    x.push_back(std::pow(2.0, k));
    y.push_back(3.0 * std::pow(x.back(), 1.5));
  }
  const auto f = fit_loglog(x, y);
  EXPECT_NEAR(f.slope, 1.5, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
  EXPECT_NEAR(f.stderr_slope, 0.0, 1e-10);
  EXPECT_EQ(f.n_points, 10);
  EXPECT_THROW(fit_loglog({1, 2}, {1, 2}), DataError);
  EXPECT_THROW(fit_loglog({1, 2, 3}, {1, 0, 2}), DataError);
  EXPECT_THROW(fit_loglog({2, 2, 2}, {1, 2, 3}), DataError);
}

TEST(Fit, FromRecords) {
  std::vector<SweepRecord> recs(4);
  for (int k = 0; k < 4; ++k) {
    recs[k].sigma = std::pow(10.0, -k);
    recs[k].total = 2.0 * recs[k].sigma;
  }
  EXPECT_NEAR(fit_loglog(recs, "sigma", "total").slope, 1.0, 1e-12);
  EXPECT_THROW(fit_loglog(recs, "sigma", "nope"), ParameterError);
}

TEST(Regimes, InteriorExcludesTransitions) {
  const double c = uniform_branching_crossover(0.25);
  EXPECT_FALSE(regime_interior({c, 0.25, c / 10}, true, 0.5));
  EXPECT_TRUE(regime_interior({c * 10, 0.25, c}, true, 0.5));
  EXPECT_TRUE(regime_interior({c / 10, 0.25, c / 100}, true, 0.5));
  EXPECT_EQ(regime_of(CompetitorKind::vortex_array), Regime::vortex);
}

TEST(Output, CsvShape) {
  EXPECT_EQ(to_csv({}), std::string(csv_header()) + "\n");
  std::vector<SweepRecord> recs(100);
  const std::string csv = to_csv(recs);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 101);
  SweepRecord r;
  r.total = std::nan("");
  EXPECT_NE(to_csv({r}).find(",nan,"), std::string::npos);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Output, JsonRoundTrip) {
  const auto recs = run_sweep(small_config());
  const auto back = records_from_json(json::parse(to_json(recs).dump()));
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t k = 0; k < recs.size(); ++k) {
    EXPECT_EQ(back[k].competitor, recs[k].competitor);
    EXPECT_EQ(back[k].skipped, recs[k].skipped);
    if (!recs[k].skipped) EXPECT_EQ(back[k].total, recs[k].total);
    EXPECT_EQ(back[k].sigma, recs[k].sigma);
  }
  EXPECT_EQ(to_csv(back), to_csv(recs));
  EXPECT_THROW(records_from_json(json::parse(R"([{"sigma": 1}])")), DataError);
}

TEST(Output, EmitWritesAndReportsPath) {
  const auto dir = std::filesystem::temp_directory_path() / "helix_emit_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.csv").string();
  emit({}, "csv", path);
  EXPECT_EQ(slurp(path), std::string(csv_header()) + "\n");
  try {
    emit({}, "csv", (dir / "missing" / "x.csv").string());
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
  }
  EXPECT_THROW(emit({}, "xml", path), ParameterError);
  std::filesystem::remove_all(dir);
}

TEST(Inequalities, CanonicalVortexTv) {
  const double sigma = 1.0;
  const GridSpec g(1024);
  const auto f = canonical_vortex(g, {0.5, 0.5}, sigma);
  const VorticityMeasure none = VorticityMeasure::empty(sigma, 0.01);
  for (double q : {2.0, std::exp(1.0), 10.0}) {
    InequalityGeometry geo;
    geo.centers = {{0.5, 0.5}};
    geo.r_inner = 0.04;
    geo.r_outer = 0.04 * q;
    const auto rows = inequality_report(f, none, ScalingParams{0.1, 0.5, 0.001}, geo);
    const auto& tv = rows[1];
    ASSERT_EQ(tv.name, "tv_annulus");
    // the enclosed circulation of the canonical field is sigma
    EXPECT_NEAR(tv.rhs, sigma * std::log(q), 1e-3 * std::log(q));
    EXPECT_GE(tv.ratio, 1.0);
    EXPECT_LE(tv.ratio, 1.5 * std::sqrt(2.0));
  }
}

TEST(Inequalities, VortexArrayReport) {
  const ScalingParams p{0.125, 0.5, 0.0125};
  const auto c = build_vortex_array(p, GridSpec(1024));
  const auto rows = inequality_report(c.field, c.measure, p);
  int core = 0, annulus = 0, elliptic = 0;
  for (const auto& r : rows) {
    if (r.name == "core") {
      ++core;
      EXPECT_GE(r.ratio, r.reference);
    }
    if (r.name == "annulus") ++annulus;
    if (r.name == "elliptic") {
      ++elliptic;
      EXPECT_GT(r.ratio, 0.0);
    }
  }
  EXPECT_EQ(core, 8);
  EXPECT_EQ(annulus, 8);
  EXPECT_EQ(elliptic, 1);
}
