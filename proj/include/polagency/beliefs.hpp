#pragma once

// Equilibrium-class-specific mixing probabilities of bad policymakers
// (xi / psi, gamma, gamma(x), gamma(y)), Bayesian posteriors of the voter
// and the bureaucrat, and the informativeness restrictions.
//
// The whole chain xi -> gamma is explicit (no fixed point); probabilities
// are obtained by pushing rent thresholds through the rent CDF and clamping.

#include <cmath>
#include <limits>
#include <optional>
#include <string_view>
#include <tuple>
#include <utility>

#include "polagency/model.hpp"

namespace polagency {

enum class EquilibriumClass { PECB, PEPB, NPE_SF, NPE_FSV, NPE_ASV };

inline constexpr EquilibriumClass kAllClasses[] = {
    EquilibriumClass::PECB, EquilibriumClass::PEPB, EquilibriumClass::NPE_SF,
    EquilibriumClass::NPE_FSV, EquilibriumClass::NPE_ASV};

inline const char* to_string(EquilibriumClass c) {
  switch (c) {
    case EquilibriumClass::PECB: return "PECB";
    case EquilibriumClass::PEPB: return "PEPB";
    case EquilibriumClass::NPE_SF: return "NPE-SF";
    case EquilibriumClass::NPE_FSV: return "NPE-FSV";
    case EquilibriumClass::NPE_ASV: return "NPE-ASV";
  }
  return "?";
}

inline std::optional<EquilibriumClass> parse_class(std::string_view s) {
  if (s == "PECB" || s == "pecb") return EquilibriumClass::PECB;
  if (s == "PEPB" || s == "pepb") return EquilibriumClass::PEPB;
  if (s == "NPE-SF" || s == "NPE_SF" || s == "npe-sf") return EquilibriumClass::NPE_SF;
  if (s == "NPE-FSV" || s == "NPE_FSV" || s == "npe-fsv") return EquilibriumClass::NPE_FSV;
  if (s == "NPE-ASV" || s == "NPE_ASV" || s == "npe-asv") return EquilibriumClass::NPE_ASV;
  return std::nullopt;
}

inline bool is_pandering(EquilibriumClass c) {
  return c == EquilibriumClass::PECB || c == EquilibriumClass::PEPB;
}

// ---------------------------------------------------------------------------
// Rent thresholds (in period-1 rent units, before applying the CDF).

// Bad bureaucrat's indifference rent for contesting toward x at the node
// where it mixes: delta * pi * rho * (1-lambda) * mu_b2.
inline double bad_bureaucrat_threshold(const ModelParams& p) {
  return p.delta * p.pi * p.rho * (1 - p.lambda) * p.mu_b2();
}

// Bad politician's threshold when the bureaucratic correction carries the
// usual (1-lambda) factor; `mix` is xi in PE, psi in NPE.
inline double bad_politician_threshold_x(const ModelParams& p, double mix) {
  require_lambda_below_one(p, "bad_politician_threshold_x");
  const double den = 1 - p.lambda * (1 + mix * (1 - p.beta));
  if (den <= 0)
    throw StructuralError("bad_politician_threshold_x: denominator not positive");
  return p.delta * (p.mu_p2() + p.office_rent) -
         p.delta * p.beta * p.rho * p.lambda * (1 - p.lambda) * p.mu_p2() / den;
}

// PEPB state-y threshold: the good bureaucrat confirms x, so the correction
// loses its (1-lambda) factor and the denominator groups (1+xi)(1-beta).
inline double bad_politician_threshold_pepb_y(const ModelParams& p, double xi) {
  require_lambda_below_one(p, "bad_politician_threshold_pepb_y");
  const double den = 1 - p.lambda * (1 + xi) * (1 - p.beta);
  if (den <= 0)
    throw StructuralError("bad_politician_threshold_pepb_y: denominator not positive");
  return p.delta * (p.mu_p2() + p.office_rent) -
         p.delta * p.beta * p.rho * p.lambda * p.mu_p2() / den;
}

// NPE-SF state-y threshold: the sign of the psi term flips relative to the
// state-x node.
inline double bad_politician_threshold_npe_sf_y(const ModelParams& p, double psi) {
  require_lambda_below_one(p, "bad_politician_threshold_npe_sf_y");
  const double den = 1 - p.lambda * (1 - psi * (1 - p.beta));
  if (den <= 0)
    throw StructuralError("bad_politician_threshold_npe_sf_y: denominator not positive");
  return p.delta * (p.mu_p2() + p.office_rent) -
         p.delta * p.beta * p.rho * p.lambda * (1 - p.lambda) * p.mu_p2() / den;
}

// Subversive-bureaucracy state-y threshold, shared by NPE-FSV (plain
// threshold) and NPE-ASV (inverse threshold).
inline double bad_politician_threshold_sv_y(const ModelParams& p, double psi) {
  require_lambda_below_one(p, "bad_politician_threshold_sv_y");
  const double den = 1 - p.lambda * (1 + p.beta - psi * (1 - p.beta));
  if (den == 0)
    throw StructuralError("bad_politician_threshold_sv_y: zero denominator");
  return p.delta * (p.mu_p2() + p.office_rent) -
         p.delta * p.beta * p.rho * p.lambda * (1 - 2 * p.lambda) * p.mu_p2() / den;
}

// psi > psi_tilde_subv is the H > 0 regime (plain threshold at state y);
// psi below it inverts the bad politician's rent cutoff.
inline double psi_tilde_subv(const ModelParams& p) {
  require_interior_lambda(p, "psi_tilde_subv");
  return p.beta / (1 - p.beta) - (1 - p.lambda) / (p.lambda * (1 - p.beta));
}

// ---------------------------------------------------------------------------
// Mixing probabilities.

// Probability a bad bureaucrat proposes x after the politician proposed y
// (pandering equilibria).
inline double xi(const ModelParams& p) {
  return p.rent_b1.cdf(bad_bureaucrat_threshold(p));
}

// Probability a bad bureaucrat proposes x after a state-mismatched proposal
// (non-pandering equilibria). Same value as xi; different event.
inline double psi(const ModelParams& p) { return xi(p); }

inline double gamma_pecb(const ModelParams& p, double xi) {
  return p.rent_p1.cdf(bad_politician_threshold_x(p, xi));
}

inline double gamma_pepb_y(const ModelParams& p, double xi) {
  return p.rent_p1.cdf(bad_politician_threshold_pepb_y(p, xi));
}

enum class NpeVariant { SF, FSV, ASV };

// gamma(x) and gamma(y) for the non-pandering classes. ASV requires the
// H < 0 regime (psi < psi_tilde_subv); FSV the opposite.
inline std::pair<double, double> gamma_npe(const ModelParams& p, double psi, NpeVariant variant) {
  const double gx = p.rent_p1.cdf(bad_politician_threshold_x(p, psi));
  switch (variant) {
    case NpeVariant::SF:
      return {gx, p.rent_p1.cdf(bad_politician_threshold_npe_sf_y(p, psi))};
    case NpeVariant::FSV: {
      if (p.lambda > 1.0 / (1 + p.beta) && psi <= psi_tilde_subv(p))
        throw std::invalid_argument("gamma_npe: FSV requires psi > psi_tilde_subv (H > 0)");
      return {gx, p.rent_p1.cdf(bad_politician_threshold_sv_y(p, psi))};
    }
    case NpeVariant::ASV: {
      if (psi >= psi_tilde_subv(p))
        throw std::invalid_argument("gamma_npe: ASV requires psi < psi_tilde_subv (H < 0)");
      return {gx, 1 - p.rent_p1.cdf(bad_politician_threshold_sv_y(p, psi))};
    }
  }
  return {gx, gx};
}

// ---------------------------------------------------------------------------
// Belief profile.

struct BeliefProfile {
  EquilibriumClass eq_class = EquilibriumClass::PECB;
  double xi_or_psi = 0;
  double gamma_x = 0, gamma_y = 0;   // equal in PECB
  double pi_v_x = 0, pi_v_y = 0;     // voter posteriors by implemented policy
  // bureaucrat posteriors by (observed proposal, state)
  double pi_b_xx = 0, pi_b_xy = 0, pi_b_yx = 0, pi_b_yy = 0;
  // probability the equilibrium play implements x, by politician type
  double x_impl_good = 0, x_impl_bad = 0;
  // PE-only intermediates: realization probabilities of a proposal
  double x_v = std::numeric_limits<double>::quiet_NaN();
  double y_v = std::numeric_limits<double>::quiet_NaN();

  double pi_b(Policy proposal, State s) const {
    if (proposal == Policy::x) return s == State::x ? pi_b_xx : pi_b_xy;
    return s == State::x ? pi_b_yx : pi_b_yy;
  }
};

namespace detail {

// P(p1 = x | politician type) under PE play: good politicians always
// propose x, bad ones propose x with probability gamma(s1). Conversion
// rates of each proposal are state-dependent, so the Bayes ratio is built
// per state; the averaged X_V / Y_V are kept as diagnostics.
inline void pe_implementation_probs(const ModelParams& p, bool bureaucrat_confirms_pandering,
                                    double xi, double gx, double gy, BeliefProfile* out) {
  const double lam = p.lambda, beta = p.beta, rho = p.rho;
  // proposal x survives to p1 = x, by state
  const double x_keep_sx = beta + (1 - beta) * (1 - lam);
  const double x_keep_sy = bureaucrat_confirms_pandering ? x_keep_sx : 1 - lam;
  // proposal y converts to p1 = x, by state
  const double y_flip_sx = lam * (beta + (1 - beta) * xi);
  const double y_flip_sy = lam * (1 - beta) * xi;

  out->x_v = rho * x_keep_sx + (1 - rho) * x_keep_sy;
  out->y_v = beta * (1 - rho * lam) + (1 - beta) * (1 - xi * lam);
  out->x_impl_good = out->x_v;
  out->x_impl_bad = rho * (gx * x_keep_sx + (1 - gx) * y_flip_sx) +
                    (1 - rho) * (gy * x_keep_sy + (1 - gy) * y_flip_sy);
}

// NPE: the good politician's proposal is state-dependent, so implementation
// probabilities are built per state; `subversive` adds the good bureaucrat's
// contest of q1 = y = s1.
inline void npe_implementation_probs(const ModelParams& p, bool subversive, double psi,
                                     double gx, double gy, BeliefProfile* out) {
  const double lam = p.lambda, beta = p.beta, rho = p.rho;
  double xg = rho * (1 - lam * (1 - beta));
  double xb = gx * xg + (1 - gx) * rho * lam * (beta + (1 - beta) * psi) +
              gy * (1 - rho) *
                  (beta * (1 - lam) + (1 - beta) * (psi + (1 - psi) * (1 - lam)));
  if (subversive) {
    xg += (1 - rho) * beta * lam;
    xb += (1 - rho) * (1 - gy) * beta * lam;
  }
  out->x_impl_good = xg;
  out->x_impl_bad = xb;
}

}  // namespace detail

// Voter posterior that the politician is good after seeing policy x,
// computed from the exact Bayes ratio of implementation probabilities.
inline double voter_posterior(const ModelParams& p, const BeliefProfile& b) {
  const double num = p.pi * b.x_impl_good;
  const double den = num + (1 - p.pi) * b.x_impl_bad;
  if (den <= 0) throw StructuralError("voter_posterior: degenerate posterior (policy x unreachable)");
  return num / den;
}

inline double voter_posterior_y(const ModelParams& p, const BeliefProfile& b) {
  const double num = p.pi * (1 - b.x_impl_good);
  const double den = num + (1 - p.pi) * (1 - b.x_impl_bad);
  if (den <= 0) throw StructuralError("voter_posterior: degenerate posterior (policy y unreachable)");
  return num / den;
}

// Bureaucrat posterior after (proposal, state), per class.
inline double bureaucrat_posterior(const ModelParams&, const BeliefProfile& b, Policy proposal,
                                   State state) {
  return b.pi_b(proposal, state);
}

// Builds the full class-consistent belief profile.
inline BeliefProfile beliefs_for(EquilibriumClass c, const ModelParams& p) {
  require_lambda_below_one(p, "beliefs_for");
  BeliefProfile b;
  b.eq_class = c;
  const double mix = xi(p);
  b.xi_or_psi = mix;
  switch (c) {
    case EquilibriumClass::PECB: {
      b.gamma_x = b.gamma_y = gamma_pecb(p, mix);
      b.pi_b_xx = b.pi_b_xy = p.pi / (p.pi + (1 - p.pi) * b.gamma_x);
      b.pi_b_yx = b.pi_b_yy = 0.0;
      detail::pe_implementation_probs(p, false, mix, b.gamma_x, b.gamma_y, &b);
      break;
    }
    case EquilibriumClass::PEPB: {
      b.gamma_x = gamma_pecb(p, mix);
      b.gamma_y = gamma_pepb_y(p, mix);
      b.pi_b_xx = p.pi / (p.pi + (1 - p.pi) * b.gamma_x);
      b.pi_b_xy = p.pi / (p.pi + (1 - p.pi) * b.gamma_y);
      b.pi_b_yx = b.pi_b_yy = 0.0;
      detail::pe_implementation_probs(p, true, mix, b.gamma_x, b.gamma_y, &b);
      break;
    }
    case EquilibriumClass::NPE_SF:
    case EquilibriumClass::NPE_FSV:
    case EquilibriumClass::NPE_ASV: {
      const NpeVariant variant = c == EquilibriumClass::NPE_SF    ? NpeVariant::SF
                                 : c == EquilibriumClass::NPE_FSV ? NpeVariant::FSV
                                                                  : NpeVariant::ASV;
      std::tie(b.gamma_x, b.gamma_y) = gamma_npe(p, mix, variant);
      b.pi_b_xy = b.pi_b_yx = 0.0;
      b.pi_b_xx = p.pi / (p.pi + (1 - p.pi) * b.gamma_x);
      b.pi_b_yy = p.pi / (p.pi + (1 - p.pi) * (1 - b.gamma_y));
      detail::npe_implementation_probs(p, c != EquilibriumClass::NPE_SF, mix, b.gamma_x,
                                       b.gamma_y, &b);
      break;
    }
  }
  b.pi_v_x = voter_posterior(p, b);
  b.pi_v_y = voter_posterior_y(p, b);
  return b;
}

// ---------------------------------------------------------------------------
// Informativeness restrictions.

struct InformativenessReport {
  bool holds = false;
  // Gamma / Lambda / hat-Gamma / tilde-Lambda ratios and rho_hat; NaN where
  // the class does not define them.
  double big_gamma = std::numeric_limits<double>::quiet_NaN();
  double big_lambda = std::numeric_limits<double>::quiet_NaN();
  double gamma_hat = std::numeric_limits<double>::quiet_NaN();
  double lambda_tilde = std::numeric_limits<double>::quiet_NaN();
  double rho_hat = std::numeric_limits<double>::quiet_NaN();
  // Upper bound the class places on xi (PE) or psi (NPE).
  double binding_bound_on_mixing = std::numeric_limits<double>::quiet_NaN();
  bool bound_is_binding = false;
  // PEPB only: the weaker bound implied by the voter's beliefs alone,
  // before the good politician's state-x step tightens it to the PECB one.
  // Reported for diagnosis, never used for certification.
  double pepb_standalone_bound = std::numeric_limits<double>::quiet_NaN();
};

inline InformativenessReport informativeness(const ModelParams& p, const BeliefProfile& b) {
  require_interior_lambda(p, "informativeness");
  InformativenessReport r;
  const double lam = p.lambda, beta = p.beta, rho = p.rho;
  const double mix_cap = (1 - lam) / (lam * (1 - beta));
  switch (b.eq_class) {
    case EquilibriumClass::PECB:
    case EquilibriumClass::PEPB: {
      r.binding_bound_on_mixing = mix_cap;
      r.bound_is_binding = lam >= 1.0 / (2 - beta);
      if (b.eq_class == EquilibriumClass::PEPB)
        r.pepb_standalone_bound = mix_cap + (1 - rho) * beta / (1 - beta);
      const double g_for_info =
          b.eq_class == EquilibriumClass::PECB ? b.gamma_x : rho * b.gamma_x + (1 - rho) * b.gamma_y;
      r.holds = g_for_info < 1.0 && b.xi_or_psi < mix_cap;
      break;
    }
    case EquilibriumClass::NPE_SF: {
      const double s = rho * (1 - b.gamma_x) + (1 - rho) * b.gamma_y;
      const double num = rho * (1 - b.gamma_x) - (1 - rho) * b.gamma_y;
      r.big_gamma = s > 0 ? num / s : -std::numeric_limits<double>::infinity();
      const double lden = rho * (2 * (1 - b.gamma_x) - beta * (1 - b.gamma_x - b.gamma_y)) -
                          beta * b.gamma_y;
      r.big_lambda = lden != 0 ? num / lden : std::numeric_limits<double>::quiet_NaN();
      r.rho_hat = b.gamma_y / (1 - b.gamma_x + b.gamma_y);
      r.binding_bound_on_mixing = mix_cap * r.big_gamma;
      r.bound_is_binding = lam > r.big_lambda;
      r.holds = b.gamma_x < 1.0 && rho > r.rho_hat && b.xi_or_psi < r.binding_bound_on_mixing;
      break;
    }
    case EquilibriumClass::NPE_FSV:
    case EquilibriumClass::NPE_ASV: {
      const double s = rho * (1 - b.gamma_x) + (1 - rho) * b.gamma_y;
      const double num = rho * (1 - b.gamma_x) - (1 - rho) * b.gamma_y;
      r.big_gamma = s > 0 ? num / s : -std::numeric_limits<double>::infinity();
      r.gamma_hat = s > 0 ? (1 - rho) * b.gamma_y / s : std::numeric_limits<double>::quiet_NaN();
      const double tden = rho * (1 - b.gamma_x) - (1 + beta) * (1 - rho) * b.gamma_y;
      r.lambda_tilde = tden != 0 ? num / tden : std::numeric_limits<double>::quiet_NaN();
      r.rho_hat = b.gamma_y / (1 - b.gamma_x + b.gamma_y);
      // psi_hat_subv
      r.binding_bound_on_mixing = mix_cap * r.big_gamma + (beta / (1 - beta)) * r.gamma_hat;
      r.bound_is_binding = true;
      const bool hat_positive = rho >= r.rho_hat || (lam > r.lambda_tilde && r.lambda_tilde > 0);
      r.holds = hat_positive && b.xi_or_psi < r.binding_bound_on_mixing;
      break;
    }
  }
  return r;
}

}  // namespace polagency
