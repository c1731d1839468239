#pragma once

// Parameter sweeps, figure-reproduction presets, and result emission.
// Sweeps evaluate grid points in parallel and write rows in grid order, so
// output bytes do not depend on scheduling.

#include <atomic>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "polagency/io.hpp"
#include "polagency/simulator.hpp"
#include "polagency/welfare.hpp"

namespace polagency {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr const char* kSweepSchema = "sweep-v1";

// Closed form where the class has one, exact game-tree expectation
// otherwise (PEPB and the subversive classes).
inline WelfareReport welfare_report(EquilibriumClass c, const ModelParams& p) {
  if (c == EquilibriumClass::PECB || c == EquilibriumClass::NPE_SF)
    return welfare_closed_form(c, p);
  const StrategyProfile sp = build_profile_unchecked(c, p);
  const ExpectedOutcome eo = exact_expected_utilities(sp, p);
  WelfareReport w;
  w.eq_class = c;
  w.eu_total = eo.voter_eu;
  w.eu_given_good = eo.voter_eu_given_good;
  w.eu_given_bad = eo.voter_eu_given_bad;
  w.source = WelfareSource::game_tree;
  return w;
}

struct SweepDimension {
  std::string name;  // parameter key, e.g. "lambda"
  double min = 0, max = 0;
  int steps = 2;  // grid points, endpoints included
};

struct SweepConfig {
  ModelParams base;
  std::vector<SweepDimension> dims;
  // any of: certificates, welfare, selection, benchmark, audit
  std::vector<std::string> outputs = {"certificates", "welfare"};
  std::string out_dir = ".";
  std::string basename = "sweep";
  std::uint64_t seed = 0;
  std::uint64_t reps = 0;  // optional Monte Carlo cross-check sample size
};

struct SweepResult {
  std::string csv_path;
  std::string sidecar_path;
  std::uint64_t grid_points = 0;
  std::uint64_t rows = 0;
};

namespace sweep_detail {

inline bool wants(const SweepConfig& cfg, std::string_view what) {
  for (const auto& o : cfg.outputs)
    if (o == what) return true;
  return false;
}

inline std::vector<std::string> sweep_columns() {
  std::vector<std::string> cols = {"grid_index"};
  for (const auto& k : config_keys()) cols.push_back(k);
  for (const char* c : {"class", "verdict", "margin", "eu_total", "eu_given_good", "eu_given_bad",
                        "source", "eta", "zeta", "eu_toothless", "eu_dictatorial", "delta_eu",
                        "beta_tilde", "audit_max_gain", "audit_passes", "mc_welfare_mean",
                        "mc_welfare_se"})
    cols.emplace_back(c);
  return cols;
}

// Rows for one grid point: one per certified class when class-dependent
// output was requested, a single class-untagged row otherwise.
inline std::vector<std::vector<std::string>> point_rows(const SweepConfig& cfg, std::uint64_t index,
                                                        const ModelParams& p) {
  const bool want_cert = wants(cfg, "certificates");
  const bool want_welfare = wants(cfg, "welfare");
  const bool want_sel = wants(cfg, "selection");
  const bool want_bench = wants(cfg, "benchmark");
  const bool want_audit = wants(cfg, "audit");

  std::vector<std::string> base;
  base.push_back(std::to_string(index));
  for (const auto& k : config_keys()) base.push_back(format_double(get_param(p, k)));

  std::string eta, zeta, bench_t, bench_d, bench_delta, bench_beta;
  if (want_sel) {
    const SelectionReport s = selection(p);
    eta = format_double(s.eta);
    zeta = format_double(s.zeta);
  }
  if (want_bench) {
    const BenchmarkReport b = benchmark(p);
    bench_t = format_double(b.eu_toothless);
    bench_d = format_double(b.eu_dictatorial);
    bench_delta = format_double(b.delta_eu);
    bench_beta = format_double(b.beta_tilde);
  }

  auto make_row = [&](const std::string& cls, const std::string& verdict,
                      const std::string& margin, const std::string& eu,
                      const std::string& eu_g, const std::string& eu_b, const std::string& src,
                      const std::string& audit_gain, const std::string& audit_pass,
                      const std::string& mc_mean, const std::string& mc_se) {
    std::vector<std::string> row = base;
    row.insert(row.end(), {cls, verdict, margin, eu, eu_g, eu_b, src, eta, zeta, bench_t, bench_d,
                           bench_delta, bench_beta, audit_gain, audit_pass, mc_mean, mc_se});
    return row;
  };

  std::vector<std::vector<std::string>> rows;
  if (!(want_cert || want_welfare || want_audit)) {
    rows.push_back(make_row("", "", "", "", "", "", "", "", "", "", ""));
    return rows;
  }

  bool any_certified = false;
  for (EquilibriumClass c : kAllClasses) {
    const EquilibriumCertificate cert = certify(c, p);
    if (!cert.verdict && !want_cert) continue;
    if (!cert.verdict && want_cert && !(want_welfare || want_audit)) {
      rows.push_back(make_row(to_string(c), "0", format_double(certificate_margin(cert)), "", "",
                              "", "", "", "", "", ""));
      continue;
    }
    if (!cert.verdict) continue;
    any_certified = true;
    std::string eu, eu_g, eu_b, src, again, apass, mcm, mcs;
    if (want_welfare) {
      const WelfareReport w = welfare_report(c, p);
      eu = format_double(w.eu_total);
      eu_g = format_double(w.eu_given_good);
      eu_b = format_double(w.eu_given_bad);
      src = w.source == WelfareSource::closed_form ? "closed-form" : "game-tree";
    }
    if (want_audit || cfg.reps > 0) {
      const StrategyProfile sp = build_profile_unchecked(c, p);
      if (want_audit) {
        const DeviationReport d = best_response_audit(sp, p);
        again = format_double(d.max_gain);
        apass = d.passes ? "1" : "0";
      }
      if (cfg.reps > 0) {
        const SimulationResult s = simulate(sp, p, cfg.reps, cfg.seed ^ index);
        mcm = format_double(s.voter_mean);
        mcs = format_double(s.voter_se);
      }
    }
    rows.push_back(make_row(to_string(c), "1",
                            format_double(certificate_margin(cert)), eu, eu_g, eu_b, src, again,
                            apass, mcm, mcs));
  }
  if (rows.empty() || (!any_certified && !want_cert))
    rows.push_back(make_row("none", "0", "", "", "", "", "", "", "", "", ""));
  return rows;
}

}  // namespace sweep_detail

inline SweepResult run_sweep(const SweepConfig& cfg) {
  for (const auto& d : cfg.dims) {
    if (d.steps < 2) throw IoError("sweep dimension " + d.name + ": steps must be >= 2");
    get_param(cfg.base, d.name);  // validates the name
  }
  std::uint64_t n_points = 1;
  for (const auto& d : cfg.dims) n_points *= static_cast<std::uint64_t>(d.steps);

  auto point_params = [&](std::uint64_t index) {
    ModelParams p = cfg.base;
    std::uint64_t rest = index;
    for (auto it = cfg.dims.rbegin(); it != cfg.dims.rend(); ++it) {
      const std::uint64_t i = rest % it->steps;
      rest /= it->steps;
      const double v = it->min + (it->max - it->min) * static_cast<double>(i) / (it->steps - 1);
      set_param(p, it->name, v);
    }
    return validate(p);
  };

  // Evaluate grid points in parallel; rows are collected per point and
  // written in grid order.
  std::vector<std::vector<std::vector<std::string>>> all_rows(n_points);
  {
    std::atomic<std::uint64_t> next{0};
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    hw = static_cast<unsigned>(std::min<std::uint64_t>(hw, n_points));
    auto worker = [&] {
      for (std::uint64_t i = next.fetch_add(1); i < n_points; i = next.fetch_add(1))
        all_rows[i] = sweep_detail::point_rows(cfg, i, point_params(i));
    };
    if (hw <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < hw; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
  }

  std::filesystem::create_directories(cfg.out_dir);
  SweepResult res;
  res.grid_points = n_points;
  res.csv_path = cfg.out_dir + "/" + cfg.basename + ".csv";
  res.sidecar_path = cfg.out_dir + "/" + cfg.basename + ".json";

  CsvWriter csv(res.csv_path, sweep_detail::sweep_columns());
  for (const auto& point : all_rows)
    for (const auto& row : point) {
      csv.row(row);
      ++res.rows;
    }

  json dims = json::array();
  for (const auto& d : cfg.dims)
    dims.push_back({{"name", d.name}, {"min", d.min}, {"max", d.max}, {"steps", d.steps}});
  const json sidecar{{"artifact_version", kArtifactVersion},
                     {"schema", kSweepSchema},
                     {"base", to_json(cfg.base)},
                     {"dims", dims},
                     {"outputs", cfg.outputs},
                     {"seed", cfg.seed},
                     {"reps", cfg.reps},
                     {"grid_points", n_points}};
  std::ofstream side(res.sidecar_path);
  if (!side) throw IoError("cannot open output file: " + res.sidecar_path);
  side << sidecar.dump(2) << "\n";
  return res;
}

// ---------------------------------------------------------------------------
// Figure presets. Panel parameters the captions describe only qualitatively
// ship as documented, overridable defaults.

struct FigureResult {
  std::string csv_path;
  std::uint64_t rows = 0;
};

inline FigureResult figure_preset(const std::string& name,
                                  const std::vector<std::string>& overrides,
                                  const std::string& out_dir, int steps = 199) {
  if (steps < 3) throw IoError("figure preset: steps must be >= 3");
  ModelParams p;  // uniform U[0,2] rents, unit payoffs, delta = 1
  enum class Kind { welfare_curve, pe_regions, pandering_transition, selection_curves };
  Kind kind;
  if (name == "fig1") {
    p.beta = 0.25;
    p.pi = p.rho = 0.5;
    p.office_rent = 1.0;
    kind = Kind::welfare_curve;
  } else if (name == "fig2") {
    // monotone-welfare panel default; beta above pi flips the direction.
    p.rho = 0.3;
    p.pi = 0.5;
    p.beta = 0.4;
    p.office_rent = 1.0;
    kind = Kind::welfare_curve;
  } else if (name == "fig3") {
    p.pi = p.rho = p.beta = 0.5;
    p.office_rent = 1.0;
    p.payoffs.v_xx = 500.0;
    kind = Kind::pe_regions;
  } else if (name == "fig4") {
    p.pi = 0.7;
    p.rho = 0.85;
    p.beta = 0.9;
    p.office_rent = 0.85;
    kind = Kind::pandering_transition;
  } else if (name == "fig5") {
    p.pi = 0.7;
    p.rho = 0.85;
    p.beta = 0.5;
    p.office_rent = 1.0;
    kind = Kind::selection_curves;
  } else {
    throw IoError("unknown figure preset: " + name);
  }
  apply_overrides(p, overrides);
  p.lambda = 0.5;
  p = validate(p);

  std::filesystem::create_directories(out_dir);
  FigureResult res;
  res.csv_path = out_dir + "/" + name + ".csv";

  auto lambda_grid = [&](int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = static_cast<double>(i + 1) / (n + 1);
    return g;
  };

  switch (kind) {
    case Kind::welfare_curve: {
      CsvWriter csv(res.csv_path,
                    {"lambda", "class", "eu_total", "eu_given_good", "eu_given_bad"});
      for (double lam : lambda_grid(steps)) {
        ModelParams q = p;
        q.lambda = lam;
        const WelfareReport w = welfare_closed_form(EquilibriumClass::PECB, q);
        csv.row({format_double(lam), "PECB", format_double(w.eu_total),
                 format_double(w.eu_given_good), format_double(w.eu_given_bad)});
        ++res.rows;
      }
      break;
    }
    case Kind::pe_regions: {
      CsvWriter csv(res.csv_path, {"lambda", "class", "coexist", "eu_total", "source"});
      for (double lam : lambda_grid(steps)) {
        ModelParams q = p;
        q.lambda = lam;
        const bool pecb = certify(EquilibriumClass::PECB, q).verdict;
        const bool pepb = certify(EquilibriumClass::PEPB, q).verdict;
        const char* coexist = pecb && pepb ? "1" : "0";
        if (pecb) {
          const WelfareReport w = welfare_report(EquilibriumClass::PECB, q);
          csv.row({format_double(lam), "PECB", coexist, format_double(w.eu_total), "closed-form"});
          ++res.rows;
        }
        if (pepb) {
          const WelfareReport w = welfare_report(EquilibriumClass::PEPB, q);
          csv.row({format_double(lam), "PEPB", coexist, format_double(w.eu_total), "game-tree"});
          ++res.rows;
        }
      }
      break;
    }
    case Kind::pandering_transition: {
      // Grid rows plus a bracketing pair around the certified-class flip,
      // located by bisection on the office-rent slack.
      std::vector<double> grid = lambda_grid(steps);
      const double ell = ell_threshold(p);
      if (ell > grid.front() && ell < grid.back()) {
        const double star = find_condition_boundary(EquilibriumClass::PECB, p, "office-rents",
                                                    grid.front(), grid.back());
        grid.push_back(star - 5e-7);
        grid.push_back(star + 5e-7);
        std::sort(grid.begin(), grid.end());
      }
      CsvWriter csv(res.csv_path, {"lambda", "class", "eu_total", "eu_given_good",
                                   "eu_given_bad"});
      for (double lam : grid) {
        ModelParams q = p;
        q.lambda = lam;
        for (EquilibriumClass c : {EquilibriumClass::PECB, EquilibriumClass::NPE_SF}) {
          if (!certify(c, q).verdict) continue;
          const WelfareReport w = welfare_closed_form(c, q);
          csv.row({format_double(lam), to_string(c), format_double(w.eu_total),
                   format_double(w.eu_given_good), format_double(w.eu_given_bad)});
          ++res.rows;
        }
      }
      break;
    }
    case Kind::selection_curves: {
      CsvWriter csv(res.csv_path, {"lambda", "eta", "zeta"});
      for (double lam : lambda_grid(steps)) {
        ModelParams q = p;
        q.lambda = lam;
        const SelectionReport s = selection(q);
        csv.row({format_double(lam), format_double(s.eta), format_double(s.zeta)});
        ++res.rows;
      }
      break;
    }
  }
  return res;
}

}  // namespace polagency
