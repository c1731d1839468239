#pragma once

// Voter welfare in closed form (PECB, NPE-SF), the toothless/dictatorial
// benchmarks, the welfare jump at the pandering threshold ell, and the
// political-selection probabilities eta and zeta.

#include <cmath>
#include <stdexcept>

#include "polagency/beliefs.hpp"
#include "polagency/certifier.hpp"
#include "polagency/continuation.hpp"
#include "polagency/model.hpp"

namespace polagency {

enum class WelfareSource { closed_form, game_tree };

struct WelfareReport {
  EquilibriumClass eq_class = EquilibriumClass::PECB;
  double eu_total = 0;
  double eu_given_good = 0;  // conditional on the period-1 politician's type
  double eu_given_bad = 0;
  WelfareSource source = WelfareSource::closed_form;
};

class UnsupportedClassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed-form voter welfare; defined for PECB and NPE-SF only (the other
// classes are served by the game-tree evaluator).
inline WelfareReport welfare_closed_form(EquilibriumClass c, const ModelParams& p) {
  require_lambda_below_one(p, "welfare_closed_form");
  if (c != EquilibriumClass::PECB && c != EquilibriumClass::NPE_SF)
    throw UnsupportedClassError("welfare_closed_form: only PECB and NPE-SF have closed forms");

  const auto& v = p.payoffs;
  const VoterContinuationTable w = voter_continuations(p);
  const double d = p.delta, rho = p.rho, beta = p.beta, lam = p.lambda;
  const BeliefProfile b = detail::beliefs_unchecked(c, p);

  WelfareReport out;
  out.eq_class = c;
  out.source = WelfareSource::closed_form;

  if (c == EquilibriumClass::PECB) {
    const double g = b.gamma_x, x = b.xi_or_psi;
    out.eu_given_good =
        beta * (rho * (v.v_xx + d * w.w_gb_gp) +
                (1 - rho) * (lam * (v.v_yy + d * w.w_gb_pi) + (1 - lam) * (v.v_xy + d * w.w_gb_gp))) +
        (1 - beta) *
            (rho * (lam * (v.v_yx + d * w.w_bb_pi) + (1 - lam) * (v.v_xx + d * w.w_bb_gp)) +
             (1 - rho) * (lam * (v.v_yy + d * w.w_bb_pi) + (1 - lam) * (v.v_xy + d * w.w_bb_gp)));
    out.eu_given_bad =
        beta * (rho * (g * (v.v_xx + d * w.w_gb_bp) +
                       (1 - g) * (lam * (v.v_xx + d * w.w_gb_bp) +
                                  (1 - lam) * (v.v_yx + d * w.w_gb_pi))) +
                (1 - rho) * (g * (lam * (v.v_yy + d * w.w_gb_pi) +
                                  (1 - lam) * (v.v_xy + d * w.w_gb_bp)) +
                             (1 - g) * (v.v_yy + d * w.w_gb_pi))) +
        (1 - beta) *
            (rho * (g * (lam * (v.v_yx + d * w.w_bb_pi) + (1 - lam) * (v.v_xx + d * w.w_bb_bp)) +
                    (1 - g) * (x * (lam * (v.v_xx + d * w.w_bb_bp) +
                                    (1 - lam) * (v.v_yx + d * w.w_bb_pi)) +
                               (1 - x) * (v.v_yx + d * w.w_bb_pi))) +
             (1 - rho) *
                 (g * (lam * (v.v_yy + d * w.w_bb_pi) + (1 - lam) * (v.v_xy + d * w.w_bb_bp)) +
                  (1 - g) * (x * (lam * (v.v_xy + d * w.w_bb_bp) +
                                  (1 - lam) * (v.v_yy + d * w.w_bb_pi)) +
                             (1 - x) * (v.v_yy + d * w.w_bb_pi))));
  } else {  // NPE_SF
    const double gx = b.gamma_x, gy = b.gamma_y, ps = b.xi_or_psi;
    out.eu_given_good =
        beta * (rho * (v.v_xx + d * w.w_gb_gp) + (1 - rho) * (v.v_yy + d * w.w_gb_pi)) +
        (1 - beta) *
            (rho * (lam * (v.v_yx + d * w.w_bb_pi) + (1 - lam) * (v.v_xx + d * w.w_bb_gp)) +
             (1 - rho) * (v.v_yy + d * w.w_bb_pi));
    out.eu_given_bad =
        beta * (rho * (gx * (v.v_xx + d * w.w_gb_bp) +
                       (1 - gx) * (lam * (v.v_xx + d * w.w_gb_bp) +
                                   (1 - lam) * (v.v_yx + d * w.w_gb_pi))) +
                (1 - rho) * (gy * (lam * (v.v_yy + d * w.w_gb_pi) +
                                   (1 - lam) * (v.v_xy + d * w.w_gb_bp)) +
                             (1 - gy) * (v.v_yy + d * w.w_gb_pi))) +
        (1 - beta) *
            (rho * (gx * (lam * (v.v_yx + d * w.w_bb_pi) + (1 - lam) * (v.v_xx + d * w.w_bb_bp)) +
                    (1 - gx) * (ps * (lam * (v.v_xx + d * w.w_bb_bp) +
                                      (1 - lam) * (v.v_yx + d * w.w_bb_pi)) +
                                (1 - ps) * (v.v_yx + d * w.w_bb_pi))) +
             (1 - rho) *
                 (gy * (ps * (v.v_xy + d * w.w_bb_bp) +
                        (1 - ps) * (lam * (v.v_yy + d * w.w_bb_pi) +
                                    (1 - lam) * (v.v_xy + d * w.w_bb_bp))) +
                  (1 - gy) * (v.v_yy + d * w.w_bb_pi)));
  }
  out.eu_total = p.pi * out.eu_given_good + (1 - p.pi) * out.eu_given_bad;
  return out;
}

// ---------------------------------------------------------------------------
// Benchmarks at lambda = 0 (toothless) and lambda = 1 (dictatorial).

struct BenchmarkReport {
  double eu_toothless = 0;    // lambda = 0
  double eu_dictatorial = 0;  // lambda = 1
  double delta_eu = 0;        // toothless minus dictatorial
  double beta_tilde = 0;      // indifference level of beta
  double gamma_at_zero = 0;   // bad politician's x-rate with a toothless bureaucracy
  double rho_pi = 0, rho_gamma = 0, rho_tilde_beta = 0;
};

// Assumes the pandering regime at lambda = 0 (office rents high enough,
// politician rent bound loose enough); evaluates both extremes regardless
// of the bundle's lambda.
inline BenchmarkReport benchmark(const ModelParams& p) {
  const auto& v = p.payoffs;
  const double d = p.delta, rho = p.rho, pi = p.pi;
  const double g = p.rent_p1.cdf(d * (p.mu_p2() + p.office_rent));

  const double w_gp = rho * v.v_xx + (1 - rho) * v.v_yy;
  const double w_bp = rho * v.v_yx + (1 - rho) * v.v_yy;
  const double w_pi = pi * w_gp + (1 - pi) * w_bp;

  BenchmarkReport r;
  r.gamma_at_zero = g;
  r.eu_toothless =
      rho * (pi * (v.v_xx + d * w_gp) +
             (1 - pi) * (g * (v.v_xx + d * w_bp) + (1 - g) * (v.v_yx + d * w_pi))) +
      (1 - rho) * (pi * (v.v_xy + d * w_gp) +
                   (1 - pi) * (g * (v.v_xy + d * w_bp) + (1 - g) * (v.v_yy + d * w_pi)));
  r.eu_dictatorial =
      (1 + d) * (rho * (p.beta * v.v_xx + (1 - p.beta) * v.v_yx) + (1 - rho) * v.v_yy);
  r.delta_eu = r.eu_toothless - r.eu_dictatorial;

  const double mx = v.v_xx - v.v_yx;  // mismatch costs in state x
  const double my = v.v_yy - v.v_xy;  // mismatch costs in state y
  const double gpi = (1 - g) * pi + g;
  r.beta_tilde = ((1 - d * pi) * gpi + 2 * d * pi) / (1 + d) -
                 (1 - rho) * gpi * my / ((1 + d) * rho * mx);
  r.rho_pi = (1 - g) * my /
             ((1 - g + d * (2 - g - 2 * pi * (1 - g))) * mx + (1 - g) * my);
  r.rho_gamma = my / (my + (1 - d * pi) * mx);
  r.rho_tilde_beta = gpi * my / (((1 - d * pi) * gpi + 2 * d * pi) * mx + gpi * my);
  return r;
}

// Welfare difference EU_PECB - EU_NPE-SF at lambda = ell, under the
// comparative-statics configuration (uniform rents, delta = 1, symmetric
// unit payoffs, 0 < E < 1). Strictly negative: the switch to non-pandering
// raises welfare discontinuously.
inline double welfare_jump_at_ell(const ModelParams& p) {
  const double E = p.office_rent;
  if (!(E > 0 && E < 1)) throw std::domain_error("welfare_jump_at_ell: requires E in (0,1)");
  const double lam = ell_threshold(p);
  const double rho = p.rho, pi = p.pi, beta = p.beta;
  const double jump_good = (1 - lam) * (1 - rho) * ((1 - lam) * (1 - pi) * rho - 1);
  const double jump_bad = 0.5 * (1 - beta) * (1 - lam) * (1 - rho) * lam * pi * rho *
                          (1 + pi * rho * (1 - lam)) * E;
  return pi * jump_good + (1 - pi) * jump_bad;
}

// ---------------------------------------------------------------------------
// Political selection in PECB.

struct SelectionReport {
  double eta = 0;     // P(bad incumbent re-elected)
  double zeta = 0;    // P(good politician in office in period 2)
  double e_zeta = 0;  // office-rent level above which zeta increases in lambda
};

// zeta from the explicit probability sum over the PECB game tree. This is
// the authoritative value; see zeta_compacted_diagnostic below.
inline SelectionReport selection(const ModelParams& p) {
  require_lambda_below_one(p, "selection");
  const double lam = p.lambda, rho = p.rho, pi = p.pi, beta = p.beta;
  const double x = xi(p);
  const double g = gamma_pecb(p, x);

  SelectionReport r;
  r.eta = (1 - pi) * (g * (rho * (beta + (1 - beta) * (1 - lam)) + (1 - rho) * (1 - lam)) +
                      (1 - g) * (rho * (beta * lam + (1 - beta) * x * lam) +
                                 (1 - rho) * (1 - beta) * x * lam));
  r.zeta =
      pi * (rho * (beta + (1 - beta) * (lam * pi + (1 - lam))) + (1 - rho) * (lam * pi + (1 - lam))) +
      (1 - pi) *
          (g * (rho * (1 - beta) * lam * pi + (1 - rho) * lam * pi) +
           (1 - g) * (rho * (beta * (1 - lam) * pi +
                             (1 - beta) * (x * (1 - lam) * pi + (1 - x) * pi)) +
                      (1 - rho) * (beta * pi + (1 - beta) * (x * (1 - lam) * pi + (1 - x) * pi))));
  r.e_zeta = (2 + (1 - 2 * lam) * rho * ((1 - beta) * pi - 2 * beta)) /
             (2 + (1 - beta) * (1 - 2 * lam) * pi * rho);
  return r;
}

// The compacted zeta polynomial. Kept as a diagnostic only: it deviates from
// the explicit sum at the fifth decimal on interior points, and the explicit
// sum is the definitionally prior quantity.
inline double zeta_compacted_diagnostic(const ModelParams& p) {
  require_lambda_below_one(p, "zeta_compacted_diagnostic");
  const double lam = p.lambda, pi = p.pi, beta = p.beta;
  const double x = xi(p);
  const double g = gamma_pecb(p, x);
  return pi * (2 - lam - g * (1 - lam) -
               pi * (1 - g) * ((1 - lam) + (1 - pi) * (1 - beta) * lam * x));
}

}  // namespace polagency
