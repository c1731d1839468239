#pragma once

// Core primitives of the two-period politician-bureaucrat-voter agency
// game: the parameter bundle, voter payoff matrix, rent distributions and
// validation. Every other component consumes validated bundles only.

#include <cmath>
#include <stdexcept>
#include <string>

namespace polagency {

// Policies and states share the same two labels.
enum class Policy { x, y };
using State = Policy;

inline const char* to_string(Policy p) { return p == Policy::x ? "x" : "y"; }

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by operations whose closed forms are not defined at lambda = 1
// (and, where stated, lambda = 0). Endpoints are served by the benchmark
// routines instead of limits of interior formulas.
class EndpointLambdaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A denominator that the equilibrium restrictions rule out turned up
// non-positive anyway; indicates inconsistent inputs, not a data condition.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Central min/max wrapper applied to every derived mixing probability, so
// all modules clamp identically.
inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// Voter (and good-policymaker) payoff v(p, s); first index policy, second
// state. Matching must strictly beat mismatching in each state.
struct PayoffMatrix {
  double v_xx = 1.0;
  double v_xy = 0.0;
  double v_yx = 0.0;
  double v_yy = 1.0;

  double operator()(Policy p, State s) const {
    if (p == Policy::x) return s == State::x ? v_xx : v_xy;
    return s == State::x ? v_yx : v_yy;
  }
};

// Ratio of policy-state mismatch costs; drives the good bureaucrat's
// contest-or-confirm choice.
inline double mismatch_ratio(const PayoffMatrix& v) {
  return (v.v_yy - v.v_xy) / (v.v_xx - v.v_yx);
}

// Rent distribution of a bad policymaker, full support on [0, upper_bound].
// Only the uniform family is instantiated; cdf/quantile/mean form the
// extension seam for other families.
struct RentSpec {
  enum class Family { Uniform };

  Family family = Family::Uniform;
  double upper_bound = 2.0;

  double mean() const { return upper_bound / 2.0; }

  // r outside the support is clamped to it.
  double cdf(double r) const {
    if (r <= 0.0) return 0.0;
    if (r >= upper_bound) return 1.0;
    return r / upper_bound;
  }

  double quantile(double p) const {
    if (p < 0.0 || p > 1.0) throw std::domain_error("rent quantile: p outside [0,1]");
    return p * upper_bound;
  }

  // Linear extension of the uniform inverse beyond p = 1. Threshold
  // formulas (mu_bar, mu_hat) are stated through this extension so they
  // stay finite where the underlying probability bound exceeds 1.
  double quantile_extended(double p) const { return p * upper_bound; }

  // E[r | r <= tau] and E[r | r > tau] with tau clamped to the support.
  double mean_below(double tau) const {
    double t = std::fmin(std::fmax(tau, 0.0), upper_bound);
    return t / 2.0;
  }
  double mean_above(double tau) const {
    double t = std::fmin(std::fmax(tau, 0.0), upper_bound);
    return (t + upper_bound) / 2.0;
  }
};

// All model primitives. rho = P(s_t = x), pi = P(good politician),
// beta = P(good bureaucrat), lambda = override strength of the
// bureaucracy, delta = discount factor, office_rent = E (may be negative).
struct ModelParams {
  double rho = 0.5;
  double pi = 0.5;
  double beta = 0.5;
  double lambda = 0.5;
  double delta = 1.0;
  double office_rent = 1.0;
  PayoffMatrix payoffs;
  RentSpec rent_p1, rent_p2, rent_b1, rent_b2;

  double mu_p1() const { return rent_p1.mean(); }
  double mu_p2() const { return rent_p2.mean(); }
  double mu_b1() const { return rent_b1.mean(); }
  double mu_b2() const { return rent_b2.mean(); }
};

// Returns the bundle iff every invariant holds; the error message names the
// first violated invariant. lambda admits the endpoints {0,1} here; the
// operations that need an interior lambda reject them with
// EndpointLambdaError at the call site.
inline ModelParams validate(const ModelParams& raw) {
  auto interior = [](double v) { return v > 0.0 && v < 1.0; };
  if (!interior(raw.rho)) throw ValidationError("probability range: rho must lie in (0,1)");
  if (!interior(raw.pi)) throw ValidationError("probability range: pi must lie in (0,1)");
  if (!interior(raw.beta)) throw ValidationError("probability range: beta must lie in (0,1)");
  if (raw.lambda < 0.0 || raw.lambda > 1.0)
    throw ValidationError("probability range: lambda must lie in [0,1]");
  if (!(raw.delta > 0.0 && raw.delta <= 1.0))
    throw ValidationError("discount range: delta must lie in (0,1]");
  if (!(raw.payoffs.v_xx > raw.payoffs.v_yx))
    throw ValidationError("payoff monotonicity: v_xx must exceed v_yx");
  if (!(raw.payoffs.v_yy > raw.payoffs.v_xy))
    throw ValidationError("payoff monotonicity: v_yy must exceed v_xy");
  for (const RentSpec* r : {&raw.rent_p1, &raw.rent_p2, &raw.rent_b1, &raw.rent_b2})
    if (!(r->upper_bound > 0.0)) throw ValidationError("negative rent bound: upper bound must be positive");
  if (!std::isfinite(raw.office_rent)) throw ValidationError("office rent must be finite");
  return raw;
}

inline void require_interior_lambda(const ModelParams& p, const char* op) {
  if (p.lambda <= 0.0 || p.lambda >= 1.0)
    throw EndpointLambdaError(std::string(op) + ": requires lambda in (0,1)");
}

// gamma-type formulas are defined at lambda = 0 but not at lambda = 1.
inline void require_lambda_below_one(const ModelParams& p, const char* op) {
  if (p.lambda >= 1.0)
    throw EndpointLambdaError(std::string(op) + ": not defined for lambda = 1");
}

}  // namespace polagency
