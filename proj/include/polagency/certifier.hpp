#pragma once

// Necessary-and-sufficient existence conditions for the five equilibrium
// classes, evaluated with per-condition signed slack (positive = satisfied
// with margin), plus every named threshold and slack-based boundary search.

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "polagency/beliefs.hpp"
#include "polagency/model.hpp"

namespace polagency {

struct ConditionResult {
  std::string name;    // human label
  std::string anchor;  // stable machine id, e.g. "pecb.i"
  bool satisfied = false;
  // Signed distance to the bound in the bound's natural unit (payoff units
  // for rent/payoff conditions, probability units for belief bounds).
  double slack = 0;
};

struct EquilibriumCertificate {
  EquilibriumClass eq_class = EquilibriumClass::PECB;
  std::vector<ConditionResult> conditions;
  bool verdict = false;
  BeliefProfile beliefs;

  const ConditionResult* find(std::string_view name_or_anchor) const {
    for (const auto& c : conditions)
      if (c.name == name_or_anchor || c.anchor == name_or_anchor) return &c;
    return nullptr;
  }
};

struct ThresholdSet {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  double delta_cb = nan;        // good-bureaucrat contest bound in PECB / NPE-SF
  double delta_pb = nan;        // good-bureaucrat confirm bound in PEPB / NPE-SV
  double mu_bar_pe = nan;       // cap on mu_b2 in pandering equilibria
  double ell = nan;             // lambda at which pandering stops being supportable
  double pandering_rhs = nan;   // right side of the office-rent inequality
  double p_value = nan;         // pandering payoff P = pandering_rhs - delta*E
  double g_value = nan;         // G coefficient of the subversive good-politician step
  double h_value = nan;         // H coefficient of the subversive bad-politician step
  double psi_tilde = nan;       // H sign-change bound on psi
  double psi_hat = nan;         // informativeness bound on psi in NPE-SV
  double psi_star = nan;        // gamma(y) < 1 bound on psi in NPE-ASV
  double lambda_star = nan;     // psi_star > 0 iff lambda above this
  double lambda_prime = nan;    // psi_star < mixing cap iff lambda below this
  double e_script = nan;        // office-rent threshold E(lambda) for non-pandering
  double g_fun = nan;           // E lower bound supporting pandering (same boundary)
  double f_fun = nan;           // E upper bound keeping gamma < 1
  double mu_hat = nan;          // lower-bound-free cap on mu_b2 in NPE-SF
};

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double pandering_rhs(const ModelParams& p) {
  const auto& v = p.payoffs;
  return v.v_yy - v.v_xy -
         p.delta * p.rho * (1 - p.pi) * (1 - p.lambda) * (v.v_xx - v.v_yx);
}

inline double mixing_cap(const ModelParams& p) {
  return (1 - p.lambda) / (p.lambda * (1 - p.beta));
}

// Threshold helpers that report +/-inf instead of throwing when the
// denominator leaves the admissible regime; certificates treat violations
// as data.
inline double threshold_x_guarded(const ModelParams& p, double mix) {
  const double den = 1 - p.lambda * (1 + mix * (1 - p.beta));
  if (den <= 0) return kInf;
  return p.delta * (p.mu_p2() + p.office_rent) -
         p.delta * p.beta * p.rho * p.lambda * (1 - p.lambda) * p.mu_p2() / den;
}

inline double threshold_pepb_y_guarded(const ModelParams& p, double mix) {
  const double den = 1 - p.lambda * (1 + mix) * (1 - p.beta);
  if (den <= 0) return kInf;
  return p.delta * (p.mu_p2() + p.office_rent) -
         p.delta * p.beta * p.rho * p.lambda * p.mu_p2() / den;
}

inline double threshold_sf_y_guarded(const ModelParams& p, double mix) {
  const double den = 1 - p.lambda * (1 - mix * (1 - p.beta));
  if (den <= 0) return kInf;
  return p.delta * (p.mu_p2() + p.office_rent) -
         p.delta * p.beta * p.rho * p.lambda * (1 - p.lambda) * p.mu_p2() / den;
}

// State-y threshold shared by the subversive classes. den = 0 is the H = 0
// knife edge; the bad politician then proposes x always (lambda >= 1/2) or
// never, which the caller encodes through the returned infinity.
inline double threshold_sv_y_guarded(const ModelParams& p, double mix) {
  const double den = 1 - p.lambda * (1 + p.beta - mix * (1 - p.beta));
  if (den == 0) return p.lambda >= 0.5 ? kInf : -kInf;
  return p.delta * (p.mu_p2() + p.office_rent) -
         p.delta * p.beta * p.rho * p.lambda * (1 - 2 * p.lambda) * p.mu_p2() / den;
}

// Certification-internal belief builder: never throws on regime mismatches,
// so failed certificates still carry a consistent snapshot.
inline BeliefProfile beliefs_unchecked(EquilibriumClass c, const ModelParams& p) {
  BeliefProfile b;
  b.eq_class = c;
  const double mix = xi(p);
  b.xi_or_psi = mix;
  switch (c) {
    case EquilibriumClass::PECB:
      b.gamma_x = b.gamma_y = p.rent_p1.cdf(threshold_x_guarded(p, mix));
      break;
    case EquilibriumClass::PEPB:
      b.gamma_x = p.rent_p1.cdf(threshold_x_guarded(p, mix));
      b.gamma_y = p.rent_p1.cdf(threshold_pepb_y_guarded(p, mix));
      break;
    case EquilibriumClass::NPE_SF:
      b.gamma_x = p.rent_p1.cdf(threshold_x_guarded(p, mix));
      b.gamma_y = p.rent_p1.cdf(threshold_sf_y_guarded(p, mix));
      break;
    case EquilibriumClass::NPE_FSV:
      b.gamma_x = p.rent_p1.cdf(threshold_x_guarded(p, mix));
      b.gamma_y = p.rent_p1.cdf(threshold_sv_y_guarded(p, mix));
      break;
    case EquilibriumClass::NPE_ASV:
      b.gamma_x = p.rent_p1.cdf(threshold_x_guarded(p, mix));
      b.gamma_y = 1 - p.rent_p1.cdf(threshold_sv_y_guarded(p, mix));
      break;
  }
  if (is_pandering(c)) {
    b.pi_b_xx = p.pi / (p.pi + (1 - p.pi) * b.gamma_x);
    b.pi_b_xy = p.pi / (p.pi + (1 - p.pi) * b.gamma_y);
    b.pi_b_yx = b.pi_b_yy = 0.0;
    detail::pe_implementation_probs(p, c == EquilibriumClass::PEPB, mix, b.gamma_x, b.gamma_y, &b);
  } else {
    b.pi_b_xy = b.pi_b_yx = 0.0;
    b.pi_b_xx = p.pi / (p.pi + (1 - p.pi) * b.gamma_x);
    b.pi_b_yy = p.pi / (p.pi + (1 - p.pi) * (1 - b.gamma_y));
    detail::npe_implementation_probs(p, c != EquilibriumClass::NPE_SF, mix, b.gamma_x, b.gamma_y,
                                     &b);
  }
  const double nx = p.pi * b.x_impl_good + (1 - p.pi) * b.x_impl_bad;
  b.pi_v_x = nx > 0 ? p.pi * b.x_impl_good / nx : p.pi;
  const double ny = p.pi * (1 - b.x_impl_good) + (1 - p.pi) * (1 - b.x_impl_bad);
  b.pi_v_y = ny > 0 ? p.pi * (1 - b.x_impl_good) / ny : p.pi;
  return b;
}

// Roots of psi_star = 0 and psi_star = mixing cap, solved in closed form
// from the underlying quadratic in lambda.
inline double lambda_star_subv(const ModelParams& p) {
  const double mu = p.mu_p2(), t = mu + p.office_rent, beta = p.beta, rho = p.rho;
  const double brm = beta * rho * mu;
  if (t <= 0 || brm <= 0) return ThresholdSet::nan;
  const double inner = 1 + t * ((1 + beta) * (1 + beta) * t - 2 * (3 - beta) * brm) / (brm * brm);
  if (inner < 0) return ThresholdSet::nan;
  return ((1 + beta) * t + brm * (1 - std::sqrt(inner))) / (4 * brm);
}

inline double lambda_prime_subv(const ModelParams& p) {
  const double mu = p.mu_p2(), t = mu + p.office_rent, beta = p.beta, rho = p.rho;
  const double brm = beta * rho * mu;
  if (t <= 0 || brm <= 0) return ThresholdSet::nan;
  const double inner = 1 + t * ((2 + beta) * (2 + beta) * t - 2 * (6 - beta) * brm) / (brm * brm);
  if (inner < 0) return ThresholdSet::nan;
  return ((2 + beta) * t + brm * (1 - std::sqrt(inner))) / (4 * brm);
}

}  // namespace detail

// lambda at which the office-rent condition switches between the pandering
// and non-pandering regimes; in (0,1) only for suitable E.
inline double ell_threshold(const ModelParams& p) {
  const auto& v = p.payoffs;
  return 1 - (v.v_yy - v.v_xy - p.delta * p.office_rent) /
                 (p.delta * p.rho * (1 - p.pi) * (v.v_xx - v.v_yx));
}

inline ThresholdSet thresholds(EquilibriumClass c, const ModelParams& p) {
  require_lambda_below_one(p, "thresholds");
  ThresholdSet t;
  const double mix = xi(p);
  const BeliefProfile b = detail::beliefs_unchecked(c, p);
  const double dfac = p.delta * p.rho * (1 - p.lambda);

  t.pandering_rhs = detail::pandering_rhs(p);
  t.p_value = t.pandering_rhs - p.delta * p.office_rent;
  t.ell = ell_threshold(p);
  t.e_script = t.g_fun = t.pandering_rhs / p.delta;
  {
    const double tau = detail::threshold_x_guarded(p, mix);
    t.f_fun = std::isfinite(tau)
                  ? (p.rent_p1.upper_bound - (tau - p.delta * p.office_rent)) / p.delta
                  : ThresholdSet::nan;
  }

  switch (c) {
    case EquilibriumClass::PECB:
      t.delta_cb = dfac * (b.pi_b_xx - p.pi);
      t.mu_bar_pe =
          p.rent_b1.quantile_extended(detail::mixing_cap(p)) / (p.delta * p.pi * p.rho * (1 - p.lambda));
      break;
    case EquilibriumClass::PEPB:
      t.delta_pb = dfac * (b.pi_b_xy - p.pi);
      t.mu_bar_pe =
          p.rent_b1.quantile_extended(detail::mixing_cap(p)) / (p.delta * p.pi * p.rho * (1 - p.lambda));
      break;
    case EquilibriumClass::NPE_SF: {
      t.delta_cb = dfac * (b.pi_b_yy - p.pi);
      const double s = p.rho * (1 - b.gamma_x) + (1 - p.rho) * b.gamma_y;
      const double big_gamma = (p.rho * (1 - b.gamma_x) - (1 - p.rho) * b.gamma_y) / s;
      t.mu_hat = p.rent_b1.quantile_extended(detail::mixing_cap(p) * big_gamma) /
                 (p.delta * p.pi * p.rho * (1 - p.lambda));
      break;
    }
    case EquilibriumClass::NPE_FSV:
    case EquilibriumClass::NPE_ASV: {
      t.delta_pb = dfac * (b.pi_b_yy - p.pi);
      t.psi_tilde = psi_tilde_subv(p);
      const double s = p.rho * (1 - b.gamma_x) + (1 - p.rho) * b.gamma_y;
      const double big_gamma = (p.rho * (1 - b.gamma_x) - (1 - p.rho) * b.gamma_y) / s;
      const double gamma_hat = (1 - p.rho) * b.gamma_y / s;
      t.psi_hat = detail::mixing_cap(p) * big_gamma + (p.beta / (1 - p.beta)) * gamma_hat;
      t.psi_star = t.psi_tilde + p.beta * p.rho * p.lambda * (1 - 2 * p.lambda) * p.mu_p2() /
                                     (p.lambda * (1 - p.beta) * (p.mu_p2() + p.office_rent));
      t.lambda_star = detail::lambda_star_subv(p);
      t.lambda_prime = detail::lambda_prime_subv(p);
      const double den = 1 - p.lambda * (1 - mix * (1 - p.beta));
      t.g_value = p.beta * (2 * p.lambda - 1) - (1 - p.beta) * (1 - p.lambda * (1 - mix));
      t.h_value = den != 0 ? 1 - p.beta * p.lambda / den : ThresholdSet::nan;
      break;
    }
  }
  return t;
}

inline EquilibriumCertificate certify(EquilibriumClass c, const ModelParams& p) {
  require_interior_lambda(p, "certify");
  EquilibriumCertificate cert;
  cert.eq_class = c;
  cert.beliefs = detail::beliefs_unchecked(c, p);
  const BeliefProfile& b = cert.beliefs;
  const double mix = b.xi_or_psi;
  const double dE = p.delta * p.office_rent;
  const double rhs = detail::pandering_rhs(p);
  const double delta_ratio = mismatch_ratio(p.payoffs);
  const double dfac = p.delta * p.rho * (1 - p.lambda);
  const double cap = detail::mixing_cap(p);
  const double rbar = p.rent_p1.upper_bound;

  auto add = [&cert](std::string name, std::string anchor, bool ok, double slack) {
    cert.conditions.push_back({std::move(name), std::move(anchor), ok, slack});
  };

  switch (c) {
    case EquilibriumClass::PECB: {
      add("office-rents", "pecb.i", dE >= rhs, dE - rhs);
      const double bound = dfac * (b.pi_b_xx - p.pi);
      add("mismatch-costs", "pecb.ii", delta_ratio >= bound, delta_ratio - bound);
      const double tau = detail::threshold_x_guarded(p, mix);
      add("politician-rent-bound", "pecb.iii", rbar > tau, rbar - tau);
      add("bureaucrat-rents", "pecb.iv", mix < cap, cap - mix);
      break;
    }
    case EquilibriumClass::PEPB: {
      add("office-rents", "pepb.i", dE >= rhs, dE - rhs);
      const double bound = dfac * (b.pi_b_xy - p.pi);
      add("mismatch-costs", "pepb.ii", delta_ratio <= bound, bound - delta_ratio);
      const double tau = detail::threshold_pepb_y_guarded(p, mix);
      add("politician-rent-bound", "pepb.iii", rbar > tau, rbar - tau);
      add("bureaucrat-rents", "pepb.iv", mix < cap, cap - mix);
      break;
    }
    case EquilibriumClass::NPE_SF: {
      add("office-rents", "npe-sf.i", dE < rhs, rhs - dE);
      const double bound = dfac * (b.pi_b_yy - p.pi);
      add("mismatch-costs", "npe-sf.ii", delta_ratio >= bound, delta_ratio - bound);
      const double tau = detail::threshold_x_guarded(p, mix);
      add("politician-rent-bound", "npe-sf.iii", rbar > tau, rbar - tau);
      const InformativenessReport inf = informativeness(p, b);
      add("state-likelihood", "npe-sf.iv", p.rho > inf.rho_hat, p.rho - inf.rho_hat);
      add("bureaucrat-rents", "npe-sf.v", mix < inf.binding_bound_on_mixing,
          inf.binding_bound_on_mixing - mix);
      break;
    }
    case EquilibriumClass::NPE_FSV: {
      add("office-rents", "npe-fsv.i", dE < rhs, rhs - dE);
      const double bound = dfac * (b.pi_b_yy - p.pi);
      add("mismatch-costs", "npe-fsv.ii", delta_ratio <= bound, bound - delta_ratio);
      const double tau = detail::threshold_sv_y_guarded(p, mix);
      add("politician-rent-bound", "npe-fsv.iii", rbar > tau, rbar - tau);
      const InformativenessReport inf = informativeness(p, b);
      add("state-likelihood", "npe-fsv.iv", p.rho >= inf.rho_hat, p.rho - inf.rho_hat);
      const double lam_cap = std::fmin(1 / (2 * p.beta), 2 / (2 + p.beta));
      add("influence-cap", "npe-fsv.v", p.lambda < lam_cap, lam_cap - p.lambda);
      const double pt = psi_tilde_subv(p), ph = inf.binding_bound_on_mixing;
      add("mixing-window", "npe-fsv.vi", mix >= pt && mix < ph, std::fmin(mix - pt, ph - mix));
      break;
    }
    case EquilibriumClass::NPE_ASV: {
      add("office-rents", "npe-asv.i", dE >= rhs, dE - rhs);
      const double bound = dfac * (b.pi_b_yy - p.pi);
      add("mismatch-costs", "npe-asv.ii", delta_ratio <= bound, bound - delta_ratio);
      const double lam_star = detail::lambda_star_subv(p);
      const bool lam_ok = std::isfinite(lam_star) && p.lambda > lam_star;
      add("influence-floor", "npe-asv.iii",
          lam_ok, std::isfinite(lam_star) ? p.lambda - lam_star : -detail::kInf);
      const double tau = detail::threshold_sv_y_guarded(p, mix);
      add("politician-rent-bound", "npe-asv.iv", rbar > tau, rbar - tau);
      const double pt = psi_tilde_subv(p);
      const double psi_star = pt + p.beta * p.rho * p.lambda * (1 - 2 * p.lambda) * p.mu_p2() /
                                       (p.lambda * (1 - p.beta) * (p.mu_p2() + p.office_rent));
      const double psi_cap = std::fmin(psi_star, detail::mixing_cap(p));
      add("mixing-cap", "npe-asv.v", mix < psi_cap, psi_cap - mix);
      break;
    }
  }

  cert.verdict = true;
  for (const auto& cond : cert.conditions) cert.verdict = cert.verdict && cond.satisfied;
  return cert;
}

inline std::vector<EquilibriumCertificate> classify_all(const ModelParams& p) {
  std::vector<EquilibriumCertificate> out;
  out.reserve(5);
  for (EquilibriumClass c : kAllClasses) out.push_back(certify(c, p));
  return out;
}

// Smallest condition slack; the verdict's signed margin at this point.
inline double certificate_margin(const EquilibriumCertificate& cert) {
  double m = detail::kInf;
  for (const auto& c : cert.conditions) m = std::fmin(m, c.slack);
  return m;
}

// Locates, by bisection on the given slack function of lambda, a boundary of
// an equilibrium region. Slacks are continuous in lambda on the interior, so
// a sign change brackets a root.
inline double bisect_lambda(const std::function<double(double)>& slack_of_lambda, double lo,
                            double hi, double tol = 1e-10) {
  double flo = slack_of_lambda(lo);
  double fhi = slack_of_lambda(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw std::invalid_argument("bisect_lambda: slack does not change sign on [lo,hi]");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = slack_of_lambda(mid);
    if (fm == 0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Boundary of one named condition of one class, scanning lambda.
inline double find_condition_boundary(EquilibriumClass c, const ModelParams& base,
                                      std::string_view condition, double lo, double hi,
                                      double tol = 1e-10) {
  auto slack = [&](double lam) {
    ModelParams p = base;
    p.lambda = lam;
    const EquilibriumCertificate cert = certify(c, p);
    const ConditionResult* cond = cert.find(condition);
    if (!cond) throw std::invalid_argument("find_condition_boundary: unknown condition");
    return cond->slack;
  };
  return bisect_lambda(slack, lo, hi, tol);
}

}  // namespace polagency
