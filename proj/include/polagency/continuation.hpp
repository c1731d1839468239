#pragma once

// Period-2 play and continuation values. In every equilibrium the second
// period is the same: good policymakers match the state, bad ones propose y.
// Tables hold undiscounted values; callers apply delta.

#include "polagency/model.hpp"

namespace polagency {

enum class PolicymakerType { good, bad };

inline const char* to_string(PolicymakerType t) {
  return t == PolicymakerType::good ? "good" : "bad";
}

inline Policy period2_action(PolicymakerType type, State state) {
  return type == PolicymakerType::good ? state : Policy::y;
}

// Policymakers' expected period-2 payoffs by own type and the type of the
// politician in office (v_* re-elected incumbent, u_* replaced incumbent).
struct ContinuationTable {
  // good bureaucrat, by politician in office
  double v_gb_gp, v_gb_bp, v_gb_pi;
  // bad bureaucrat
  double v_bb_gp, v_bb_bp, v_bb_pi;
  // good politician: re-elected (v) vs replaced (u), by bureaucrat type
  double v_gp_gb, v_gp_bb, u_gp_gb, u_gp_bb;
  // bad politician re-elected; replaced bad politicians get 0
  double v_bp_gb, v_bp_bb;
  static constexpr double u_bp = 0.0;
};

// Voter's expected period-2 payoff by bureaucrat type and politician in
// office ("pi" columns average over a freshly drawn challenger).
struct VoterContinuationTable {
  double w_gb_gp, w_gb_bp, w_gb_pi;
  double w_bb_gp, w_bb_bp, w_bb_pi;
};

inline VoterContinuationTable voter_continuations(const ModelParams& p) {
  const auto& v = p.payoffs;
  VoterContinuationTable w;
  w.w_gb_gp = p.rho * v.v_xx + (1 - p.rho) * v.v_yy;
  w.w_gb_bp = p.rho * (p.lambda * v.v_xx + (1 - p.lambda) * v.v_yx) + (1 - p.rho) * v.v_yy;
  w.w_gb_pi = p.pi * w.w_gb_gp + (1 - p.pi) * w.w_gb_bp;
  w.w_bb_gp = p.rho * (p.lambda * v.v_yx + (1 - p.lambda) * v.v_xx) + (1 - p.rho) * v.v_yy;
  w.w_bb_bp = p.rho * v.v_yx + (1 - p.rho) * v.v_yy;
  w.w_bb_pi = p.pi * w.w_bb_gp + (1 - p.pi) * w.w_bb_bp;
  return w;
}

inline ContinuationTable policymaker_continuations(const ModelParams& p) {
  const auto& v = p.payoffs;
  const double rho = p.rho, lam = p.lambda, pi = p.pi, E = p.office_rent;
  ContinuationTable t;

  // A good bureaucrat's policy payoff coincides with the voter's.
  const VoterContinuationTable w = voter_continuations(p);
  t.v_gb_gp = w.w_gb_gp;
  t.v_gb_bp = w.w_gb_bp;
  t.v_gb_pi = w.w_gb_pi;

  // A bad bureaucrat collects mu_b2 whenever y is implemented.
  t.v_bb_gp = p.mu_b2() * (1 - rho * (1 - lam));
  t.v_bb_bp = p.mu_b2();
  t.v_bb_pi = p.mu_b2() * (1 - pi * rho * (1 - lam));

  t.v_gp_gb = rho * v.v_xx + (1 - rho) * v.v_yy + E;
  t.v_gp_bb = rho * (lam * v.v_yx + (1 - lam) * v.v_xx) + (1 - rho) * v.v_yy + E;
  t.u_gp_gb = rho * (pi + (1 - pi) * lam) * v.v_xx + (1 - rho) * v.v_yy +
              (1 - pi) * (1 - lam) * rho * v.v_yx;
  t.u_gp_bb = pi * rho * (1 - lam) * v.v_xx + (1 - rho) * v.v_yy +
              rho * ((1 - pi) + pi * lam) * v.v_yx;

  t.v_bp_gb = (1 - rho * lam) * p.mu_p2() + E;
  t.v_bp_bb = p.mu_p2() + E;
  return t;
}

}  // namespace polagency
