#pragma once

// Flat key-value parameter configs (exact decimal round-trip), JSON export
// of every report type, and a small CSV writer.

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polagency/beliefs.hpp"
#include "polagency/certifier.hpp"
#include "polagency/simulator.hpp"
#include "polagency/welfare.hpp"

namespace polagency {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal that round-trips the double exactly.
inline std::string format_double(double v) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

using ConfigMap = std::map<std::string, std::string>;

// Parses "key = value" lines; '#' starts a comment, blanks ignored.
inline ConfigMap parse_config_text(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r\n");
      size_t b = s.find_last_not_of(" \t\r\n");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw IoError("config line " + std::to_string(lineno) + ": empty key or value");
    out[key] = value;
  }
  return out;
}

inline ConfigMap parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "rho",  "pi",   "beta", "lambda", "delta", "E",
      "v_xx", "v_xy", "v_yx", "v_yy",   "rent_p1_upper", "rent_p2_upper",
      "rent_b1_upper", "rent_b2_upper"};
  return keys;
}

inline void set_param(ModelParams& p, const std::string& key, double value) {
  if (key == "rho") p.rho = value;
  else if (key == "pi") p.pi = value;
  else if (key == "beta") p.beta = value;
  else if (key == "lambda") p.lambda = value;
  else if (key == "delta") p.delta = value;
  else if (key == "E") p.office_rent = value;
  else if (key == "v_xx") p.payoffs.v_xx = value;
  else if (key == "v_xy") p.payoffs.v_xy = value;
  else if (key == "v_yx") p.payoffs.v_yx = value;
  else if (key == "v_yy") p.payoffs.v_yy = value;
  else if (key == "rent_p1_upper") p.rent_p1.upper_bound = value;
  else if (key == "rent_p2_upper") p.rent_p2.upper_bound = value;
  else if (key == "rent_b1_upper") p.rent_b1.upper_bound = value;
  else if (key == "rent_b2_upper") p.rent_b2.upper_bound = value;
  else throw IoError("unknown parameter key: " + key);
}

inline double get_param(const ModelParams& p, const std::string& key) {
  if (key == "rho") return p.rho;
  if (key == "pi") return p.pi;
  if (key == "beta") return p.beta;
  if (key == "lambda") return p.lambda;
  if (key == "delta") return p.delta;
  if (key == "E") return p.office_rent;
  if (key == "v_xx") return p.payoffs.v_xx;
  if (key == "v_xy") return p.payoffs.v_xy;
  if (key == "v_yx") return p.payoffs.v_yx;
  if (key == "v_yy") return p.payoffs.v_yy;
  if (key == "rent_p1_upper") return p.rent_p1.upper_bound;
  if (key == "rent_p2_upper") return p.rent_p2.upper_bound;
  if (key == "rent_b1_upper") return p.rent_b1.upper_bound;
  if (key == "rent_b2_upper") return p.rent_b2.upper_bound;
  throw IoError("unknown parameter key: " + key);
}

// Unvalidated bundle from a config; missing keys keep their defaults.
inline ModelParams params_from_config(const ConfigMap& cfg) {
  ModelParams p;
  for (const auto& [key, value] : cfg) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
      throw IoError("config value for " + key + " is not a number: " + value);
    set_param(p, key, v);
  }
  return p;
}

inline ConfigMap config_from_params(const ModelParams& p) {
  ConfigMap cfg;
  for (const auto& key : config_keys()) cfg[key] = format_double(get_param(p, key));
  return cfg;
}

inline std::string serialize_config(const ConfigMap& cfg) {
  std::string out;
  for (const auto& key : config_keys()) {
    auto it = cfg.find(key);
    if (it == cfg.end()) continue;
    out += key;
    out += " = ";
    out += it->second;
    out += "\n";
  }
  return out;
}

// "key=value" overrides, as passed via --set.
inline void apply_overrides(ModelParams& p, const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw IoError("override must look like key=value: " + kv);
    set_param(p, kv.substr(0, eq), std::strtod(kv.c_str() + eq + 1, nullptr));
  }
}

// ---------------------------------------------------------------------------
// JSON export.

using nlohmann::json;

inline json to_json(const ModelParams& p) {
  json j;
  for (const auto& key : config_keys()) j[key] = get_param(p, key);
  return j;
}

inline json to_json(const BeliefProfile& b) {
  json j{{"class", to_string(b.eq_class)},
         {"gamma_x", b.gamma_x},
         {"gamma_y", b.gamma_y},
         {"pi_v_x", b.pi_v_x},
         {"pi_v_y", b.pi_v_y},
         {"pi_b", {{"xx", b.pi_b_xx}, {"xy", b.pi_b_xy}, {"yx", b.pi_b_yx}, {"yy", b.pi_b_yy}}},
         {"x_impl_good", b.x_impl_good},
         {"x_impl_bad", b.x_impl_bad}};
  j[is_pandering(b.eq_class) ? "xi" : "psi"] = b.xi_or_psi;
  return j;
}

inline json to_json(const EquilibriumCertificate& c) {
  json conds = json::array();
  for (const auto& cond : c.conditions)
    conds.push_back({{"name", cond.name},
                     {"anchor", cond.anchor},
                     {"satisfied", cond.satisfied},
                     {"slack", cond.slack}});
  return json{{"class", to_string(c.eq_class)},
              {"verdict", c.verdict},
              {"conditions", conds},
              {"beliefs", to_json(c.beliefs)}};
}

inline json to_json(const ContinuationTable& t) {
  return json{{"v_gb_gp", t.v_gb_gp}, {"v_gb_bp", t.v_gb_bp}, {"v_gb_pi", t.v_gb_pi},
              {"v_bb_gp", t.v_bb_gp}, {"v_bb_bp", t.v_bb_bp}, {"v_bb_pi", t.v_bb_pi},
              {"v_gp_gb", t.v_gp_gb}, {"v_gp_bb", t.v_gp_bb}, {"u_gp_gb", t.u_gp_gb},
              {"u_gp_bb", t.u_gp_bb}, {"v_bp_gb", t.v_bp_gb}, {"v_bp_bb", t.v_bp_bb},
              {"u_bp", ContinuationTable::u_bp}};
}

inline json to_json(const VoterContinuationTable& w) {
  return json{{"w_gb_gp", w.w_gb_gp}, {"w_gb_bp", w.w_gb_bp}, {"w_gb_pi", w.w_gb_pi},
              {"w_bb_gp", w.w_bb_gp}, {"w_bb_bp", w.w_bb_bp}, {"w_bb_pi", w.w_bb_pi}};
}

inline json to_json(const InformativenessReport& r) {
  return json{{"holds", r.holds},
              {"big_gamma", r.big_gamma},
              {"big_lambda", r.big_lambda},
              {"gamma_hat", r.gamma_hat},
              {"lambda_tilde", r.lambda_tilde},
              {"rho_hat", r.rho_hat},
              {"binding_bound_on_mixing", r.binding_bound_on_mixing},
              {"bound_is_binding", r.bound_is_binding},
              {"pepb_standalone_bound", r.pepb_standalone_bound}};
}

inline json to_json(const WelfareReport& w) {
  return json{{"class", to_string(w.eq_class)},
              {"eu_total", w.eu_total},
              {"eu_given_good", w.eu_given_good},
              {"eu_given_bad", w.eu_given_bad},
              {"source", w.source == WelfareSource::closed_form ? "closed-form" : "game-tree"}};
}

inline json to_json(const BenchmarkReport& b) {
  return json{{"eu_toothless", b.eu_toothless},
              {"eu_dictatorial", b.eu_dictatorial},
              {"delta_eu", b.delta_eu},
              {"beta_tilde", b.beta_tilde},
              {"gamma_at_zero", b.gamma_at_zero},
              {"rho_pi", b.rho_pi},
              {"rho_gamma", b.rho_gamma},
              {"rho_tilde_beta", b.rho_tilde_beta}};
}

inline json to_json(const SelectionReport& s) {
  return json{{"eta", s.eta}, {"zeta", s.zeta}, {"e_zeta", s.e_zeta}};
}

inline json to_json(const SimulationResult& s) {
  return json{{"n", s.n},
              {"seed", s.seed},
              {"voter", {{"mean", s.voter_mean}, {"se", s.voter_se}}},
              {"politician", {{"mean", s.politician_mean}, {"se", s.politician_se}}},
              {"bureaucrat", {{"mean", s.bureaucrat_mean}, {"se", s.bureaucrat_se}}},
              {"prob_x", s.prob_x_hat},
              {"posterior_x", s.posterior_x_hat},
              {"posterior_y", s.posterior_y_hat},
              {"reelect_rate_good", s.reelect_rate_good},
              {"reelect_rate_bad", s.reelect_rate_bad},
              {"degenerate_se", s.degenerate_se}};
}

inline json to_json(const DeviationReport& d) {
  json devs = json::array();
  for (const auto& e : d.deviations)
    devs.push_back({{"player", e.player},
                    {"info_set", e.info_set},
                    {"prescribed_payoff", e.prescribed_payoff},
                    {"best_alternative", e.best_alternative},
                    {"gain", e.gain}});
  return json{{"passes", d.passes},
              {"max_gain", d.max_gain},
              {"voter_informative", d.voter_informative},
              {"voter_knife_edge", d.voter_knife_edge},
              {"pi_v_x", d.pi_v_x},
              {"pi_v_y", d.pi_v_y},
              {"deviations", devs}};
}

// ---------------------------------------------------------------------------
// CSV writer: fixed column set per file, doubles formatted to round-trip.

class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> columns)
      : out_(path), n_cols_(columns.size()) {
    if (!out_) throw IoError("cannot open output file: " + path);
    for (size_t i = 0; i < columns.size(); ++i) {
      if (i) out_ << ',';
      out_ << columns[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != n_cols_) throw IoError("csv row width mismatch");
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
  size_t n_cols_;
};

}  // namespace polagency
