#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "helix/helix.hpp"

using nlohmann::json;
using namespace helix;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError(path, "cannot write");
}

EnergyKind energy_kind(const std::string& s) {
  auto k = parse_energy_kind(s);
  if (!k) throw ParameterError("unknown energy kind '" + s + "'");
  return *k;
}

VortexLog vortex_log(const std::string& s) {
  if (s == "abs_log_theta") return VortexLog::abs_log_theta;
  if (s == "log_sigma_over_eps_theta") return VortexLog::log_sigma_over_eps_theta;
  throw ParameterError("unknown vortex log '" + s + "'");
}

json breakdown_json(const EnergyBreakdown& e) {
  return {{"bulk", e.bulk}, {"regularizer", e.regularizer}, {"total", e.total}};
}

json field_json(const VectorField2D& f) {
  const GridSpec& g = f.spec();
  json b1 = json::array(), b2 = json::array();
  for (const Vec2& v : f.values()) {
    b1.push_back(v.x);
    b2.push_back(v.y);
  }
  return {{"nx", g.nx()}, {"ny", g.ny()}, {"h", g.h()}, {"origin", {g.origin().x, g.origin().y}},
          {"beta1", std::move(b1)}, {"beta2", std::move(b2)}};
}

VectorField2D field_from_json(const json& j) {
  const int nx = j.at("nx"), ny = j.at("ny");
  const double h = j.at("h");
  const auto& o = j.at("origin");
  const GridSpec g = GridSpec::with_spacing({o.at(0), o.at(1)}, h, nx, ny);
  const auto& b1 = j.at("beta1");
  const auto& b2 = j.at("beta2");
  if (b1.size() != g.size() || b2.size() != g.size())
    throw InputError("field: beta1/beta2 must have nx*ny entries");
  VectorField2D f(g);
  for (int jj = 0; jj < ny; ++jj)
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(jj) * nx + i;
      f(i, jj) = {b1[k].get<double>(), b2[k].get<double>()};
    }
  return f;
}

json atoms_json(const VorticityMeasure& mu) {
  json a = json::array();
  for (const auto& at : mu.atoms()) a.push_back({at.x.x, at.x.y, at.gamma});
  return a;
}

json admissibility_json(const AdmissibilityReport& r, double tol) {
  return {{"boundary_deviation", r.max_boundary_deviation},
          {"curl_residual", r.curl_residual},
          {"tolerance", tol},
          {"measure_ok", r.measure_ok},
          {"passed", r.passed}};
}

struct ParamArgs {
  double sigma = 0, theta = 0, eps = 0;
  ScalingParams get() const {
    ScalingParams p{sigma, theta, eps};
    p.validate();
    return p;
  }
};

void add_params(CLI::App* app, ParamArgs& a) {
  app->add_option("--sigma", a.sigma, "surface tension sigma")->required();
  app->add_option("--theta", a.theta, "volume fraction theta in (0,1/2]")->required();
  app->add_option("--eps", a.eps, "vortex core radius eps")->required();
}

Competitor construct(const std::string& kind, const ScalingParams& p, int n, int levels) {
  const GridSpec g(n);
  if (kind == "uniform") return build_uniform(p, g);
  if (kind == "vortex") return build_vortex_array(p, g);
  if (kind != "branching") throw ParameterError("unknown construction '" + kind + "'");
  if (levels > 0) return build_branching(p, g, levels);
  const int top = max_branching_levels(p, g);
  if (top < 1) throw GridError("branching: grid too coarse for a single generation");
  std::optional<Competitor> best;
  double best_total = 0.0;
  for (int L = 1; L <= top; ++L) {
    Competitor c = build_branching(p, g, L);
    const double t = competitor_energy(EnergyKind::E1, c).total;
    if (!best || t < best_total) {
      best_total = t;
      best = std::move(c);
    }
  }
  return std::move(*best);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"helix: energy scaling experiments for multi-well vector fields with vortices"};
  app.require_subcommand(1);

  // eval
  auto* eval = app.add_subcommand("eval", "scaling terms for (sigma, theta, eps); energy of a field file");
  ParamArgs eval_p;
  std::string eval_log = "abs_log_theta", eval_field, eval_energy = "E1";
  add_params(eval, eval_p);
  eval->add_option("--vortex-log", eval_log, "abs_log_theta | log_sigma_over_eps_theta");
  eval->add_option("--field", eval_field, "field JSON written by construct");
  eval->add_option("--energy", eval_energy, "E1 | E2 | EA");

  // construct
  auto* cons = app.add_subcommand("construct", "build a competitor on the unit square");
  ParamArgs cons_p;
  std::string cons_kind, cons_out, cons_energy = "E1";
  int cons_n = 0, cons_levels = 0;
  add_params(cons, cons_p);
  cons->add_option("--kind", cons_kind, "uniform | branching | vortex")->required();
  cons->add_option("--grid-n", cons_n, "cells per side (default from eps)");
  cons->add_option("--levels", cons_levels, "branching generations (default: best)");
  cons->add_option("--energy", cons_energy, "E1 | E2 | EA");
  cons->add_option("--out", cons_out, "write the field and atoms as JSON");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  std::string sweep_cfg, sweep_out, sweep_format;
  sweep->add_option("--config", sweep_cfg, "sweep config JSON (default sweep if absent)");
  sweep->add_option("--output", sweep_out, "output path (overrides the config; '-' for stdout)");
  sweep->add_option("--format", sweep_format, "csv | json (overrides the config)");

  // balls
  auto* balls = app.add_subcommand("balls", "grow and merge balls");
  std::string balls_in;
  double balls_t = 0.0;
  balls->add_option("--input", balls_in, "JSON list of {center:[x,y], radius, charge}")->required();
  balls->add_option("--t", balls_t, "growth time")->required();

  // spin
  auto* spin = app.add_subcommand("spin", "discrete J1-J3 spin model");
  double spin_alpha = 0;
  int spin_m = 0;
  std::string spin_mode = "spiral";
  bool spin_report = false;
  spin->add_option("--alpha", spin_alpha, "coupling ratio alpha")->required();
  spin->add_option("--m", spin_m, "sites per side")->required();
  spin->add_option("--mode", spin_mode, "spiral | constant");
  spin->add_flag("--report", spin_report, "add vortex and continuum data");

  // check
  auto* check = app.add_subcommand("check", "inequality report for a construction");
  ParamArgs check_p;
  std::string check_kind = "vortex";
  int check_n = 0;
  add_params(check, check_p);
  check->add_option("--construct", check_kind, "vortex");
  check->add_option("--grid-n", check_n, "cells per side (default from eps)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) {
      const ScalingParams p = eval_p.get();
      const ScalingTerms t = scaling_terms(p, vortex_log(eval_log));
      json out = {{"sigma", p.sigma}, {"theta", p.theta}, {"eps", p.eps},
                  {"uniform", t.uniform}, {"branching", t.branching}, {"vortex", t.vortex},
                  {"s_value", t.min()}, {"regime", to_string(t.argmin())}};
      if (!eval_field.empty()) {
        const VectorField2D f = field_from_json(read_json(eval_field).at("field"));
        out["energy"] = breakdown_json(energy(energy_kind(eval_energy), f, p.sigma));
        out["energy_kind"] = eval_energy;
      }
      std::cout << out.dump(2) << "\n";
    } else if (*cons) {
      const ScalingParams p = cons_p.get();
      const int n = cons_n > 0 ? cons_n : default_grid_n(p.eps);
      const Competitor c = construct(cons_kind, p, n, cons_levels);
      const auto rep = admissibility_report(c);
      json summary = {{"kind", to_string(c.kind)},
                      {"sigma", p.sigma}, {"theta", p.theta}, {"eps", p.eps},
                      {"grid_n", n}, {"levels", c.levels},
                      {"atoms", c.atoms_in_domain},
                      {"energy_kind", cons_energy},
                      {"energy", breakdown_json(competitor_energy(energy_kind(cons_energy), c))},
                      {"admissibility", admissibility_json(rep, c.declared_tolerance)}};
      if (!cons_out.empty()) {
        json full = summary;
        full["field"] = field_json(c.field);
        full["atom_list"] = atoms_json(c.measure);
        write_text(cons_out, full.dump() + "\n");
      }
      std::cout << summary.dump(2) << "\n";
    } else if (*sweep) {
      SweepConfig cfg = sweep_cfg.empty() ? default_sweep_config() : sweep_config_from_json(read_json(sweep_cfg));
      if (!sweep_out.empty()) cfg.output = sweep_out;
      if (!sweep_format.empty()) cfg.format = sweep_format;
      validate(cfg);
      const auto records = run_sweep(cfg);
      if (cfg.output.empty() || cfg.output == "-")
        std::cout << (cfg.format == "csv" ? to_csv(records) : to_json(records).dump(2) + "\n");
      else
        emit(records, cfg.format, cfg.output);
    } else if (*balls) {
      const json in = read_json(balls_in);
      if (!in.is_array()) throw InputError(balls_in + ": expected a JSON array of balls");
      std::vector<Ball> init;
      for (const auto& b : in)
        init.push_back({{b.at("center").at(0), b.at("center").at(1)}, b.at("radius"), b.value("charge", 0.0)});
      const BallFamily fam = grow_balls(init, balls_t);
      json out_balls = json::array(), log = json::array();
      for (const auto& b : fam.balls)
        out_balls.push_back({{"center", {b.center.x, b.center.y}}, {"radius", b.radius}, {"charge", b.charge}});
      for (const auto& e : fam.merge_log) log.push_back({{"time", e.time}, {"merged", e.merged}, {"result", e.result}});
      std::cout << json{{"t", fam.time}, {"balls", out_balls}, {"merges", log},
                        {"merge_times", merge_times(init, balls_t)}}.dump(2)
                << "\n";
    } else if (*spin) {
      if (spin_m < 3) throw ParameterError("spin: need m >= 3");
      if (!(spin_alpha > 0.0)) throw ParameterError("spin: alpha must be positive");
      std::optional<ModelParams> mp;
      if (spin_alpha < 4.0) mp.emplace(spin_alpha, 1.0 / spin_m);
      SpinField s(spin_m);
      if (spin_mode == "spiral") {
        if (!mp) throw ParameterError("spin: spirals need alpha < 4");
        s = build_spiral(*mp, spin_m, 1, 1);
      } else if (spin_mode != "constant") {
        throw ParameterError("spin: unknown mode '" + spin_mode + "'");
      }
      const auto ren = renormalized_energy(s, std::min(spin_alpha, 4.0));
      json out = {{"alpha", spin_alpha}, {"m", spin_m}, {"mode", spin_mode},
                  {"energy", spin_energy(s, spin_alpha)}};
      if (mp) {
        out["squares"] = ren.squares;
        out["offset"] = ren.offset;
        out["renormalized"] = ren.value;
        out["per_triple"] = ren.squares / ren.triples;
        out["optimal_angle"] = mp->optimal_angle();
      }
      if (spin_report) {
        out["vortices"] = detect_vortices(extract_angles(s)).size();
        if (mp) {
          const ContinuumImage img = to_continuum(s, *mp);
          out["continuum_sigma"] = img.sigma;
          out["continuum_EA"] = breakdown_json(energy(EnergyKind::EA, img.field, img.sigma));
        }
      }
      std::cout << out.dump(2) << "\n";
    } else if (*check) {
      if (check_kind != "vortex") throw ParameterError("check: only --construct vortex is supported");
      const ScalingParams p = check_p.get();
      const int n = check_n > 0 ? check_n : default_grid_n(p.eps);
      const Competitor c = build_vortex_array(p, GridSpec(n));
      json rows = json::array();
      for (const auto& r : inequality_report(c.field, c.measure, p)) {
        json row = {{"name", r.name}, {"atom", r.atom}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"ratio", r.ratio}};
        row["reference"] = std::isnan(r.reference) ? json(nullptr) : json(r.reference);
        rows.push_back(std::move(row));
      }
      std::cout << json{{"sigma", p.sigma}, {"theta", p.theta}, {"eps", p.eps}, {"grid_n", n},
                        {"rows", rows}}.dump(2)
                << "\n";
    }
  } catch (const RegimeError& e) {
    std::cerr << "regime: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
