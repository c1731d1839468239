// Command-line front end: validation, certification, welfare/benchmark/
// selection reports, best-response audits, parameter sweeps and figure
// presets. Results go to stdout (json) or CSV files (sweeps, figures).

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polagency/polagency.hpp"

namespace {

using namespace polagency;

struct CommonOpts {
  std::string config;
  std::vector<std::string> sets;
  std::string out = ".";
  std::uint64_t seed = 0;
  std::uint64_t reps = 0;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts* o) {
  cmd->add_option("--config", o->config, "flat key=value parameter file");
  cmd->add_option("--set", o->sets, "override, e.g. --set lambda=0.6 (repeatable)");
  cmd->add_option("--out", o->out, "output directory");
  cmd->add_option("--seed", o->seed, "RNG seed");
  cmd->add_option("--reps", o->reps, "Monte Carlo replication count");
  cmd->add_option("--format", o->format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

ModelParams load_params(const CommonOpts& o) {
  ModelParams p;
  if (!o.config.empty()) p = params_from_config(parse_config_file(o.config));
  apply_overrides(p, o.sets);
  return validate(p);
}

EquilibriumClass class_arg(const std::string& s) {
  auto c = parse_class(s);
  if (!c) throw CLI::ValidationError("--class", "unknown equilibrium class: " + s);
  return *c;
}

void emit_certificates(const std::vector<EquilibriumCertificate>& certs, const CommonOpts& o) {
  if (o.format == "json") {
    json arr = json::array();
    for (const auto& c : certs) arr.push_back(to_json(c));
    std::cout << (certs.size() == 1 ? to_json(certs[0]) : arr).dump(2) << "\n";
    return;
  }
  std::cout << "class,verdict,condition,anchor,satisfied,slack\n";
  for (const auto& c : certs)
    for (const auto& cond : c.conditions)
      std::cout << to_string(c.eq_class) << ',' << (c.verdict ? 1 : 0) << ',' << cond.name << ','
                << cond.anchor << ',' << (cond.satisfied ? 1 : 0) << ','
                << format_double(cond.slack) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-period politician-bureaucrat-voter agency game toolkit"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string cls = "PECB";
  std::string preset = "fig1";
  int steps = 199;
  int grid = 101;
  double tol = 1e-9;
  std::vector<std::string> dims;
  std::string outputs = "certificates,welfare";
  std::string basename = "sweep";

  CLI::App* c_validate = app.add_subcommand("validate", "check a parameter bundle");
  add_common(c_validate, &o);

  CLI::App* c_certify = app.add_subcommand("certify", "equilibrium certificates");
  add_common(c_certify, &o);
  c_certify->add_option("--class", cls, "PECB|PEPB|NPE-SF|NPE-FSV|NPE-ASV|all");

  CLI::App* c_welfare = app.add_subcommand("welfare", "voter welfare for one class");
  add_common(c_welfare, &o);
  c_welfare->add_option("--class", cls, "equilibrium class")->required();

  CLI::App* c_bench = app.add_subcommand("benchmark", "toothless vs dictatorial bureaucracy");
  add_common(c_bench, &o);

  CLI::App* c_sel = app.add_subcommand("selection", "political selection probabilities");
  add_common(c_sel, &o);

  CLI::App* c_audit = app.add_subcommand("audit", "best-response audit of a certified profile");
  add_common(c_audit, &o);
  c_audit->add_option("--class", cls, "equilibrium class")->required();
  c_audit->add_option("--grid", grid, "rent grid points");
  c_audit->add_option("--tol", tol, "gain tolerance");

  CLI::App* c_sweep = app.add_subcommand("sweep", "grid sweep to CSV");
  add_common(c_sweep, &o);
  c_sweep->add_option("--dim", dims, "swept dimension name=min:max:steps (repeatable)");
  c_sweep->add_option("--outputs", outputs,
                      "comma list of certificates,welfare,selection,benchmark,audit");
  c_sweep->add_option("--basename", basename, "output file stem");

  CLI::App* c_fig = app.add_subcommand("figure", "figure-reproduction presets");
  add_common(c_fig, &o);
  c_fig->add_option("--preset", preset, "fig1|fig2|fig3|fig4|fig5")->required();
  c_fig->add_option("--steps", steps, "lambda grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (c_validate->parsed()) {
      const ModelParams p = load_params(o);
      if (o.format == "json")
        std::cout << to_json(p).dump(2) << "\n";
      else
        std::cout << serialize_config(config_from_params(p));
      return 0;
    }
    if (c_certify->parsed()) {
      const ModelParams p = load_params(o);
      std::vector<EquilibriumCertificate> certs;
      if (cls == "all")
        certs = classify_all(p);
      else
        certs.push_back(certify(class_arg(cls), p));
      emit_certificates(certs, o);
      return 0;
    }
    if (c_welfare->parsed()) {
      const ModelParams p = load_params(o);
      const WelfareReport w = welfare_report(class_arg(cls), p);
      if (o.format == "json") {
        std::cout << to_json(w).dump(2) << "\n";
      } else {
        std::cout << "class,eu_total,eu_given_good,eu_given_bad,source\n"
                  << to_string(w.eq_class) << ',' << format_double(w.eu_total) << ','
                  << format_double(w.eu_given_good) << ',' << format_double(w.eu_given_bad) << ','
                  << (w.source == WelfareSource::closed_form ? "closed-form" : "game-tree")
                  << "\n";
      }
      return 0;
    }
    if (c_bench->parsed()) {
      const ModelParams p = load_params(o);
      std::cout << to_json(benchmark(p)).dump(2) << "\n";
      return 0;
    }
    if (c_sel->parsed()) {
      const ModelParams p = load_params(o);
      std::cout << to_json(selection(p)).dump(2) << "\n";
      return 0;
    }
    if (c_audit->parsed()) {
      const ModelParams p = load_params(o);
      const StrategyProfile sp = build_profile(class_arg(cls), p);
      const DeviationReport d = best_response_audit(sp, p, grid, tol);
      if (o.format == "json") {
        std::cout << to_json(d).dump(2) << "\n";
      } else {
        std::cout << "passes,max_gain,voter_informative,player,info_set,gain\n";
        if (d.deviations.empty())
          std::cout << (d.passes ? 1 : 0) << ',' << format_double(d.max_gain) << ','
                    << (d.voter_informative ? 1 : 0) << ",,,\n";
        for (const auto& e : d.deviations)
          std::cout << (d.passes ? 1 : 0) << ',' << format_double(d.max_gain) << ','
                    << (d.voter_informative ? 1 : 0) << ',' << e.player << ",\"" << e.info_set
                    << "\"," << format_double(e.gain) << "\n";
      }
      return 0;
    }
    if (c_sweep->parsed()) {
      SweepConfig cfg;
      cfg.base = load_params(o);
      cfg.out_dir = o.out;
      cfg.basename = basename;
      cfg.seed = o.seed;
      cfg.reps = o.reps;
      cfg.outputs.clear();
      for (size_t pos = 0; pos < outputs.size();) {
        size_t comma = outputs.find(',', pos);
        if (comma == std::string::npos) comma = outputs.size();
        cfg.outputs.push_back(outputs.substr(pos, comma - pos));
        pos = comma + 1;
      }
      for (const auto& d : dims) {
        SweepDimension dim;
        char name[64];
        if (std::sscanf(d.c_str(), "%63[^=]=%lf:%lf:%d", name, &dim.min, &dim.max, &dim.steps) != 4)
          throw IoError("bad --dim, expected name=min:max:steps: " + d);
        dim.name = name;
        cfg.dims.push_back(dim);
      }
      const SweepResult res = run_sweep(cfg);
      std::cout << res.csv_path << "\n" << res.sidecar_path << "\n";
      return 0;
    }
    if (c_fig->parsed()) {
      const FigureResult res = figure_preset(preset, o.sets, o.out, steps);
      std::cout << res.csv_path << "\n";
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const EndpointLambdaError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const CertificationError& e) {
    std::cerr << "certification error: " << e.what() << "\n"
              << to_json(e.certificate()).dump(2) << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
