#pragma once

// Independent verification engine. Strategy profiles are executable data;
// the exact evaluator integrates the full two-period timeline analytically
// (payoffs are affine in own rent on every branch), the Monte Carlo runner
// replays it draw by draw, and the best-response audit checks every
// information set for profitable one-shot deviations.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "polagency/certifier.hpp"
#include "polagency/continuation.hpp"
#include "polagency/model.hpp"
#include "polagency/rng.hpp"

namespace polagency {

// ---------------------------------------------------------------------------
// Executable strategies.

enum class RuleKind { always_x, always_y, threshold_x, inverse_threshold_x };

// One decision rule over the policymaker's private rent draw.
struct ActionRule {
  RuleKind kind = RuleKind::always_x;
  double tau = 0;  // rent cutoff for the threshold kinds

  Policy act(double rent) const {
    switch (kind) {
      case RuleKind::always_x: return Policy::x;
      case RuleKind::always_y: return Policy::y;
      case RuleKind::threshold_x: return rent <= tau ? Policy::x : Policy::y;
      case RuleKind::inverse_threshold_x: return rent >= tau ? Policy::x : Policy::y;
    }
    return Policy::x;
  }

  double prob_x(const RentSpec& rent) const {
    switch (kind) {
      case RuleKind::always_x: return 1;
      case RuleKind::always_y: return 0;
      case RuleKind::threshold_x: return rent.cdf(tau);
      case RuleKind::inverse_threshold_x: return 1 - rent.cdf(tau);
    }
    return 1;
  }
};

struct RentBranch {
  double prob;
  double mean_rent;  // E[r | branch]
  Policy action;
};

// Splits a rule into at most two branches with exact weights and
// conditional rent means.
inline int rent_branches(const ActionRule& rule, const RentSpec& rent,
                         std::array<RentBranch, 2>* out) {
  const double px = rule.prob_x(rent);
  int n = 0;
  auto push = [&](double prob, double mean, Policy a) {
    if (prob > 0) (*out)[n++] = {prob, mean, a};
  };
  switch (rule.kind) {
    case RuleKind::always_x: push(1, rent.mean(), Policy::x); break;
    case RuleKind::always_y: push(1, rent.mean(), Policy::y); break;
    case RuleKind::threshold_x:
      push(px, rent.mean_below(rule.tau), Policy::x);
      push(1 - px, rent.mean_above(rule.tau), Policy::y);
      break;
    case RuleKind::inverse_threshold_x:
      push(px, rent.mean_above(rule.tau), Policy::x);
      push(1 - px, rent.mean_below(rule.tau), Policy::y);
      break;
  }
  return n;
}

inline int idx(PolicymakerType t) { return t == PolicymakerType::good ? 0 : 1; }
inline int idx(Policy p) { return p == Policy::x ? 0 : 1; }

// Period-1 strategies for both policymakers. The voter rule is the
// informative-equilibrium rule (re-elect iff the implemented policy is x)
// and period-2 play is pinned by second-period dominance, so neither is a
// degree of freedom here.
struct StrategyProfile {
  EquilibriumClass eq_class = EquilibriumClass::PECB;
  ActionRule politician[2][2];     // [type][state]
  ActionRule bureaucrat[2][2][2];  // [type][state][politician proposal]

  const ActionRule& pol(PolicymakerType t, State s) const { return politician[idx(t)][idx(s)]; }
  const ActionRule& bur(PolicymakerType t, State s, Policy q) const {
    return bureaucrat[idx(t)][idx(s)][idx(q)];
  }
};

class CertificationError : public std::runtime_error {
 public:
  CertificationError(const std::string& msg, EquilibriumCertificate cert)
      : std::runtime_error(msg), certificate_(std::move(cert)) {}
  const EquilibriumCertificate& certificate() const { return certificate_; }

 private:
  EquilibriumCertificate certificate_;
};

// Profile construction from the class definitions; thresholds are the
// quantiles of the class's mixing probabilities, so the induced mixing
// reproduces the belief profile exactly.
inline StrategyProfile build_profile_unchecked(EquilibriumClass c, const ModelParams& p) {
  require_interior_lambda(p, "build_profile");
  StrategyProfile sp;
  sp.eq_class = c;
  const double mix = xi(p);
  const double tau_b = std::fmin(std::fmax(bad_bureaucrat_threshold(p), 0.0), p.rent_b1.upper_bound);
  auto clamp_tau = [&](double t) { return std::fmin(std::fmax(t, 0.0), p.rent_p1.upper_bound); };

  const bool pe = is_pandering(c);
  const int g = idx(PolicymakerType::good), b = idx(PolicymakerType::bad);
  const int sx = idx(State::x), sy = idx(State::y);
  const int qx = idx(Policy::x), qy = idx(Policy::y);

  // Good politician: pander in PE, match the state in NPE.
  sp.politician[g][sx] = {RuleKind::always_x, 0};
  sp.politician[g][sy] = pe ? ActionRule{RuleKind::always_x, 0} : ActionRule{RuleKind::always_y, 0};

  // Bad politician: rent thresholds, state-dependent outside PECB.
  const double tau_x = clamp_tau(detail::threshold_x_guarded(p, mix));
  sp.politician[b][sx] = {RuleKind::threshold_x, tau_x};
  switch (c) {
    case EquilibriumClass::PECB:
      sp.politician[b][sy] = {RuleKind::threshold_x, tau_x};
      break;
    case EquilibriumClass::PEPB:
      sp.politician[b][sy] = {RuleKind::threshold_x,
                              clamp_tau(detail::threshold_pepb_y_guarded(p, mix))};
      break;
    case EquilibriumClass::NPE_SF:
      sp.politician[b][sy] = {RuleKind::threshold_x,
                              clamp_tau(detail::threshold_sf_y_guarded(p, mix))};
      break;
    case EquilibriumClass::NPE_FSV:
      sp.politician[b][sy] = {RuleKind::threshold_x,
                              clamp_tau(detail::threshold_sv_y_guarded(p, mix))};
      break;
    case EquilibriumClass::NPE_ASV:
      sp.politician[b][sy] = {RuleKind::inverse_threshold_x,
                              clamp_tau(detail::threshold_sv_y_guarded(p, mix))};
      break;
  }

  // Good bureaucrat.
  for (int s : {sx, sy}) {
    for (int q : {qx, qy}) {
      ActionRule match{s == sx ? RuleKind::always_x : RuleKind::always_y, 0};
      ActionRule rule = match;
      if (c == EquilibriumClass::PEPB && q == qx) rule = {RuleKind::always_x, 0};
      if ((c == EquilibriumClass::NPE_FSV || c == EquilibriumClass::NPE_ASV) && s == sy && q == qy)
        rule = {RuleKind::always_x, 0};  // subversion node
      sp.bureaucrat[g][s][q] = rule;
    }
  }

  // Bad bureaucrat: always y at the rent-collecting node, mixes toward x at
  // the node that would re-elect the politician.
  for (int s : {sx, sy}) {
    for (int q : {qx, qy}) {
      const bool mixing_node = pe ? (q == qy) : (q != s);
      sp.bureaucrat[b][s][q] =
          mixing_node ? ActionRule{RuleKind::threshold_x, tau_b} : ActionRule{RuleKind::always_y, 0};
    }
  }
  return sp;
}

inline StrategyProfile build_profile(EquilibriumClass c, const ModelParams& p) {
  EquilibriumCertificate cert = certify(c, p);
  if (!cert.verdict)
    throw CertificationError(std::string("build_profile: ") + to_string(c) +
                                 " is not certified at these parameters",
                             std::move(cert));
  return build_profile_unchecked(c, p);
}

// ---------------------------------------------------------------------------
// Period-2 subgame values (derived from second-period dominance plus the
// policymaking lottery, independently of the closed-form tables).

namespace sim_detail {

struct CellValues {
  double voter;   // expected v(p2, s2)
  double holder;  // expected payoff of the politician in office (incl. E)
  double bur;     // expected payoff of the bureaucrat
};

inline CellValues period2_cell(const ModelParams& p, PolicymakerType tp, PolicymakerType tb) {
  CellValues out{0, 0, 0};
  for (State s2 : {State::x, State::y}) {
    const double ws = s2 == State::x ? p.rho : 1 - p.rho;
    const Policy qp = period2_action(tp, s2);
    const Policy qb = period2_action(tb, s2);
    struct {
      double w;
      Policy pol;
    } lots[2];
    int n = 0;
    if (qp == qb) {
      lots[n++] = {1.0, qp};
    } else {
      lots[n++] = {p.lambda, qb};
      lots[n++] = {1 - p.lambda, qp};
    }
    for (int i = 0; i < n; ++i) {
      const double w = ws * lots[i].w;
      const Policy p2 = lots[i].pol;
      out.voter += w * p.payoffs(p2, s2);
      out.holder += w * (tp == PolicymakerType::good
                             ? p.payoffs(p2, s2)
                             : (p2 == Policy::y ? p.mu_p2() : 0.0));
      out.bur += w * (tb == PolicymakerType::good ? p.payoffs(p2, s2)
                                                  : (p2 == Policy::y ? p.mu_b2() : 0.0));
    }
  }
  out.holder += p.office_rent;
  return out;
}

struct Continuations {
  // [holder type][bureaucrat type]
  CellValues cell[2][2];
  ModelParams params;

  explicit Continuations(const ModelParams& p) : params(p) {
    for (PolicymakerType tp : {PolicymakerType::good, PolicymakerType::bad})
      for (PolicymakerType tb : {PolicymakerType::good, PolicymakerType::bad})
        cell[idx(tp)][idx(tb)] = period2_cell(p, tp, tb);
  }

  double voter(PolicymakerType tp, PolicymakerType tb, bool reelected) const {
    if (reelected) return cell[idx(tp)][idx(tb)].voter;
    return params.pi * cell[0][idx(tb)].voter + (1 - params.pi) * cell[1][idx(tb)].voter;
  }
  double politician(PolicymakerType tp, PolicymakerType tb, bool reelected) const {
    if (reelected) return cell[idx(tp)][idx(tb)].holder;
    if (tp == PolicymakerType::bad) return 0.0;  // out-of-office bad politician
    // an ousted good politician still values the policy like a voter
    return params.pi * cell[0][idx(tb)].voter + (1 - params.pi) * cell[1][idx(tb)].voter;
  }
  double bureaucrat(PolicymakerType tp, PolicymakerType tb, bool reelected) const {
    if (reelected) return cell[idx(tp)][idx(tb)].bur;
    return params.pi * cell[0][idx(tb)].bur + (1 - params.pi) * cell[1][idx(tb)].bur;
  }
};

inline double period1_politician_payoff(const ModelParams& p, PolicymakerType tp, Policy p1,
                                        State s1, double rent) {
  return (tp == PolicymakerType::good ? p.payoffs(p1, s1)
                                      : (p1 == Policy::y ? rent : 0.0)) +
         p.office_rent;
}

inline double period1_bureaucrat_payoff(const ModelParams& p, PolicymakerType tb, Policy p1,
                                        State s1, double rent) {
  return tb == PolicymakerType::good ? p.payoffs(p1, s1) : (p1 == Policy::y ? rent : 0.0);
}

}  // namespace sim_detail

// ---------------------------------------------------------------------------
// Exact expectation over the full timeline. No sampling: rent rules split
// into branches with closed-form weights and conditional means, the
// disagreement lottery and type priors are enumerated.

struct ExpectedOutcome {
  double voter_eu = 0;
  double voter_eu_given_good = 0, voter_eu_given_bad = 0;
  double politician_eu = 0, bureaucrat_eu = 0;
  double prob_x = 0;  // P(p1 = x)
  double prob_x_given_good = 0, prob_x_given_bad = 0;
  double reelect_rate_good = 0, reelect_rate_bad = 0;
};

inline ExpectedOutcome exact_expected_utilities(const StrategyProfile& sp, const ModelParams& p) {
  const sim_detail::Continuations cont(p);
  ExpectedOutcome out;
  for (State s1 : {State::x, State::y}) {
    const double ws = s1 == State::x ? p.rho : 1 - p.rho;
    for (PolicymakerType tp : {PolicymakerType::good, PolicymakerType::bad}) {
      const double wp = tp == PolicymakerType::good ? p.pi : 1 - p.pi;
      for (PolicymakerType tb : {PolicymakerType::good, PolicymakerType::bad}) {
        const double wb = tb == PolicymakerType::good ? p.beta : 1 - p.beta;
        std::array<RentBranch, 2> pb{};
        const int npb = rent_branches(sp.pol(tp, s1), p.rent_p1, &pb);
        for (int i = 0; i < npb; ++i) {
          std::array<RentBranch, 2> bb{};
          const int nbb = rent_branches(sp.bur(tb, s1, pb[i].action), p.rent_b1, &bb);
          for (int j = 0; j < nbb; ++j) {
            struct {
              double w;
              Policy pol;
            } lots[2];
            int n = 0;
            if (pb[i].action == bb[j].action) {
              lots[n++] = {1.0, pb[i].action};
            } else {
              lots[n++] = {p.lambda, bb[j].action};
              lots[n++] = {1 - p.lambda, pb[i].action};
            }
            for (int k = 0; k < n; ++k) {
              const double w = ws * wp * wb * pb[i].prob * bb[j].prob * lots[k].w;
              const Policy p1 = lots[k].pol;
              const bool reelected = p1 == Policy::x;
              const double voter =
                  p.payoffs(p1, s1) + p.delta * cont.voter(tp, tb, reelected);
              const double pol =
                  sim_detail::period1_politician_payoff(p, tp, p1, s1, pb[i].mean_rent) +
                  p.delta * cont.politician(tp, tb, reelected);
              const double bur =
                  sim_detail::period1_bureaucrat_payoff(p, tb, p1, s1, bb[j].mean_rent) +
                  p.delta * cont.bureaucrat(tp, tb, reelected);
              out.voter_eu += w * voter;
              out.politician_eu += w * pol;
              out.bureaucrat_eu += w * bur;
              const double wt = ws * wb * pb[i].prob * bb[j].prob * lots[k].w;
              if (tp == PolicymakerType::good) {
                out.voter_eu_given_good += wt * voter;
                if (reelected) {
                  out.prob_x_given_good += wt;
                  out.reelect_rate_good += wt;
                }
              } else {
                out.voter_eu_given_bad += wt * voter;
                if (reelected) {
                  out.prob_x_given_bad += wt;
                  out.reelect_rate_bad += wt;
                }
              }
              if (reelected) out.prob_x += w;
            }
          }
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo runner. Replication i draws from the counter stream
// (seed, i); replications are summed in fixed-size blocks so the reduction
// is identical for any thread count.

struct SimulationResult {
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double voter_mean = 0, voter_se = 0;
  double politician_mean = 0, politician_se = 0;
  double bureaucrat_mean = 0, bureaucrat_se = 0;
  double prob_x_hat = 0;
  // empirical posterior that the politician is good given the policy
  double posterior_x_hat = 0, posterior_y_hat = 0;
  double reelect_rate_good = 0, reelect_rate_bad = 0;
  bool degenerate_se = false;  // n < 2
};

inline SimulationResult simulate(const StrategyProfile& sp, const ModelParams& p, std::uint64_t n,
                                 std::uint64_t seed, unsigned n_threads = 0) {
  if (n < 1) throw std::invalid_argument("simulate: n must be >= 1");
  const sim_detail::Continuations cont(p);

  struct BlockSums {
    double v = 0, v2 = 0, pol = 0, pol2 = 0, bur = 0, bur2 = 0;
    std::uint64_t n_x = 0, n_x_good = 0, n_good = 0;
    std::uint64_t reelect_good = 0, reelect_bad = 0;
  };
  constexpr std::uint64_t kBlock = 1 << 16;
  const std::uint64_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<BlockSums> blocks(n_blocks);

  auto run_block = [&](std::uint64_t bi) {
    BlockSums acc;
    const std::uint64_t lo = bi * kBlock, hi = std::min<std::uint64_t>(n, lo + kBlock);
    for (std::uint64_t i = lo; i < hi; ++i) {
      CounterRng rng(seed, i);
      const State s1 = rng.next_bernoulli(p.rho) ? State::x : State::y;
      const PolicymakerType tp =
          rng.next_bernoulli(p.pi) ? PolicymakerType::good : PolicymakerType::bad;
      const PolicymakerType tb =
          rng.next_bernoulli(p.beta) ? PolicymakerType::good : PolicymakerType::bad;
      const double r1p = rng.next_uniform() * p.rent_p1.upper_bound;
      const double r1b = rng.next_uniform() * p.rent_b1.upper_bound;
      const double lot1 = rng.next_uniform();
      const State s2 = rng.next_bernoulli(p.rho) ? State::x : State::y;
      const PolicymakerType challenger =
          rng.next_bernoulli(p.pi) ? PolicymakerType::good : PolicymakerType::bad;
      const double r2p = rng.next_uniform() * p.rent_p2.upper_bound;
      const double r2b = rng.next_uniform() * p.rent_b2.upper_bound;
      const double lot2 = rng.next_uniform();

      const Policy qp = sp.pol(tp, s1).act(r1p);
      const Policy qb = sp.bur(tb, s1, qp).act(r1b);
      const Policy p1 = qp == qb ? qp : (lot1 < p.lambda ? qb : qp);
      const bool reelected = p1 == Policy::x;
      const PolicymakerType t2p = reelected ? tp : challenger;

      const Policy q2p = period2_action(t2p, s2);
      const Policy q2b = period2_action(tb, s2);
      const Policy p2 = q2p == q2b ? q2p : (lot2 < p.lambda ? q2b : q2p);

      const double voter = p.payoffs(p1, s1) + p.delta * p.payoffs(p2, s2);
      double pol = sim_detail::period1_politician_payoff(p, tp, p1, s1, r1p);
      if (reelected) {
        pol += p.delta * ((tp == PolicymakerType::good ? p.payoffs(p2, s2)
                                                       : (p2 == Policy::y ? r2p : 0.0)) +
                          p.office_rent);
      } else if (tp == PolicymakerType::good) {
        pol += p.delta * p.payoffs(p2, s2);
      }
      double bur = sim_detail::period1_bureaucrat_payoff(p, tb, p1, s1, r1b) +
                   p.delta * (tb == PolicymakerType::good ? p.payoffs(p2, s2)
                                                          : (p2 == Policy::y ? r2b : 0.0));

      acc.v += voter;
      acc.v2 += voter * voter;
      acc.pol += pol;
      acc.pol2 += pol * pol;
      acc.bur += bur;
      acc.bur2 += bur * bur;
      if (p1 == Policy::x) {
        ++acc.n_x;
        if (tp == PolicymakerType::good) ++acc.n_x_good;
      }
      if (tp == PolicymakerType::good) {
        ++acc.n_good;
        if (reelected) ++acc.reelect_good;
      } else if (reelected) {
        ++acc.reelect_bad;
      }
    }
    blocks[bi] = acc;
  };

  unsigned hw = n_threads ? n_threads : std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  hw = static_cast<unsigned>(std::min<std::uint64_t>(hw, n_blocks));
  if (hw <= 1) {
    for (std::uint64_t bi = 0; bi < n_blocks; ++bi) run_block(bi);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(hw);
    for (unsigned t = 0; t < hw; ++t)
      pool.emplace_back([&] {
        for (std::uint64_t bi = next.fetch_add(1); bi < n_blocks; bi = next.fetch_add(1))
          run_block(bi);
      });
    for (auto& th : pool) th.join();
  }

  BlockSums tot;
  for (const auto& b : blocks) {  // serial reduction in block order
    tot.v += b.v;
    tot.v2 += b.v2;
    tot.pol += b.pol;
    tot.pol2 += b.pol2;
    tot.bur += b.bur;
    tot.bur2 += b.bur2;
    tot.n_x += b.n_x;
    tot.n_x_good += b.n_x_good;
    tot.n_good += b.n_good;
    tot.reelect_good += b.reelect_good;
    tot.reelect_bad += b.reelect_bad;
  }

  SimulationResult r;
  r.n = n;
  r.seed = seed;
  const double dn = static_cast<double>(n);
  auto finish = [&](double s, double s2, double* mean, double* se) {
    *mean = s / dn;
    if (n < 2) {
      *se = std::numeric_limits<double>::quiet_NaN();
      r.degenerate_se = true;
    } else {
      const double var = std::fmax(0.0, (s2 - s * s / dn) / (dn - 1));
      *se = std::sqrt(var / dn);
    }
  };
  finish(tot.v, tot.v2, &r.voter_mean, &r.voter_se);
  finish(tot.pol, tot.pol2, &r.politician_mean, &r.politician_se);
  finish(tot.bur, tot.bur2, &r.bureaucrat_mean, &r.bureaucrat_se);
  r.prob_x_hat = static_cast<double>(tot.n_x) / dn;
  r.posterior_x_hat = tot.n_x ? static_cast<double>(tot.n_x_good) / tot.n_x
                              : std::numeric_limits<double>::quiet_NaN();
  const std::uint64_t n_y = n - tot.n_x;
  r.posterior_y_hat = n_y ? static_cast<double>(tot.n_good - tot.n_x_good) / n_y
                          : std::numeric_limits<double>::quiet_NaN();
  r.reelect_rate_good =
      tot.n_good ? static_cast<double>(tot.reelect_good) / tot.n_good
                 : std::numeric_limits<double>::quiet_NaN();
  const std::uint64_t n_bad = n - tot.n_good;
  r.reelect_rate_bad = n_bad ? static_cast<double>(tot.reelect_bad) / n_bad
                             : std::numeric_limits<double>::quiet_NaN();
  return r;
}

// ---------------------------------------------------------------------------
// Best-response audit.

struct DeviationReport {
  struct Entry {
    std::string player;    // "politician" | "bureaucrat" | "voter"
    std::string info_set;  // e.g. "type=bad state=y proposal=x r=0.5"
    double prescribed_payoff = 0;
    double best_alternative = 0;
    double gain = 0;
  };
  std::vector<Entry> deviations;  // entries with positive gain, largest first
  double max_gain = 0;
  bool passes = false;
  bool voter_informative = false;  // Pi_V(x) > pi and Pi_V(y) < pi, strictly
  bool voter_knife_edge = false;   // posterior equals the prior exactly
  double pi_v_x = 0, pi_v_y = 0;   // profile-implied voter posteriors
};

namespace sim_detail {

// Expected payoff of a politician of type tp in state s proposing `action`,
// given own rent r1p, the opponents' profile rules and the voter rule.
inline double politician_action_value(const StrategyProfile& sp, const ModelParams& p,
                                      const Continuations& cont, PolicymakerType tp, State s,
                                      double r1p, Policy action) {
  double total = 0;
  for (PolicymakerType tb : {PolicymakerType::good, PolicymakerType::bad}) {
    const double wb = tb == PolicymakerType::good ? p.beta : 1 - p.beta;
    std::array<RentBranch, 2> bb{};
    const int nbb = rent_branches(sp.bur(tb, s, action), p.rent_b1, &bb);
    for (int j = 0; j < nbb; ++j) {
      struct {
        double w;
        Policy pol;
      } lots[2];
      int n = 0;
      if (action == bb[j].action) {
        lots[n++] = {1.0, action};
      } else {
        lots[n++] = {p.lambda, bb[j].action};
        lots[n++] = {1 - p.lambda, action};
      }
      for (int k = 0; k < n; ++k) {
        const Policy p1 = lots[k].pol;
        const bool reelected = p1 == Policy::x;
        total += wb * bb[j].prob * lots[k].w *
                 (period1_politician_payoff(p, tp, p1, s, r1p) +
                  p.delta * cont.politician(tp, tb, reelected));
      }
    }
  }
  return total;
}

// Probability the profile's politician of type tp proposes q in state s.
inline double proposal_prob(const StrategyProfile& sp, const ModelParams& p, PolicymakerType tp,
                            State s, Policy q) {
  const double px = sp.pol(tp, s).prob_x(p.rent_p1);
  return q == Policy::x ? px : 1 - px;
}

// Bureaucrat's posterior that the politician is good after seeing proposal q
// in state s, from the profile by Bayes' rule. An unreachable proposal is
// attributed to the bad politician, which matches the off-path beliefs of
// all five classes.
inline double profile_posterior_good(const StrategyProfile& sp, const ModelParams& p, State s,
                                     Policy q) {
  const double pg = proposal_prob(sp, p, PolicymakerType::good, s, q);
  const double pb = proposal_prob(sp, p, PolicymakerType::bad, s, q);
  const double den = p.pi * pg + (1 - p.pi) * pb;
  if (den <= 0) return 0.0;
  return p.pi * pg / den;
}

inline double bureaucrat_action_value(const StrategyProfile& sp, const ModelParams& p,
                                      const Continuations& cont, PolicymakerType tb, State s,
                                      Policy q, double r1b, Policy action) {
  const double post_good = profile_posterior_good(sp, p, s, q);
  double total = 0;
  for (PolicymakerType tp : {PolicymakerType::good, PolicymakerType::bad}) {
    const double wp = tp == PolicymakerType::good ? post_good : 1 - post_good;
    if (wp == 0) continue;
    struct {
      double w;
      Policy pol;
    } lots[2];
    int n = 0;
    if (q == action) {
      lots[n++] = {1.0, q};
    } else {
      lots[n++] = {p.lambda, action};
      lots[n++] = {1 - p.lambda, q};
    }
    for (int k = 0; k < n; ++k) {
      const Policy p1 = lots[k].pol;
      const bool reelected = p1 == Policy::x;
      total += wp * lots[k].w *
               (period1_bureaucrat_payoff(p, tb, p1, s, r1b) +
                p.delta * cont.bureaucrat(tp, tb, reelected));
    }
  }
  return total;
}

}  // namespace sim_detail

// Checks every information set for a profitable one-shot deviation, holding
// the rest of the profile fixed. Rent-bearing decisions are scanned on a
// quantile grid (the payoff is affine in own rent on each branch, so the
// largest gain is attained at a grid endpoint or at the threshold itself).
inline DeviationReport best_response_audit(const StrategyProfile& sp, const ModelParams& p,
                                           int rent_grid = 101, double tol = 1e-9) {
  require_interior_lambda(p, "best_response_audit");
  if (rent_grid < 2) throw std::invalid_argument("best_response_audit: rent_grid must be >= 2");
  const sim_detail::Continuations cont(p);
  DeviationReport report;

  auto record = [&](std::string player, std::string info, double prescribed, double alt) {
    const double gain = alt - prescribed;
    if (gain > report.max_gain) report.max_gain = gain;
    if (gain > 1e-12)
      report.deviations.push_back({std::move(player), std::move(info), prescribed, alt, gain});
  };

  char buf[160];
  for (PolicymakerType tp : {PolicymakerType::good, PolicymakerType::bad}) {
    for (State s : {State::x, State::y}) {
      const int n_r = tp == PolicymakerType::bad ? rent_grid : 1;
      for (int k = 0; k < n_r; ++k) {
        const double r =
            tp == PolicymakerType::bad
                ? p.rent_p1.quantile(static_cast<double>(k) / (n_r > 1 ? n_r - 1 : 1))
                : 0.0;
        const Policy prescribed = sp.pol(tp, s).act(r);
        const Policy alt = prescribed == Policy::x ? Policy::y : Policy::x;
        const double v0 = sim_detail::politician_action_value(sp, p, cont, tp, s, r, prescribed);
        const double v1 = sim_detail::politician_action_value(sp, p, cont, tp, s, r, alt);
        std::snprintf(buf, sizeof buf, "type=%s state=%s%s r=%.6g", to_string(tp), to_string(s),
                      tp == PolicymakerType::bad ? "" : " (rent-free)", r);
        record("politician", buf, v0, v1);
      }
    }
  }

  for (PolicymakerType tb : {PolicymakerType::good, PolicymakerType::bad}) {
    for (State s : {State::x, State::y}) {
      for (Policy q : {Policy::x, Policy::y}) {
        const int n_r = tb == PolicymakerType::bad ? rent_grid : 1;
        for (int k = 0; k < n_r; ++k) {
          const double r =
              tb == PolicymakerType::bad
                  ? p.rent_b1.quantile(static_cast<double>(k) / (n_r > 1 ? n_r - 1 : 1))
                  : 0.0;
          const Policy prescribed = sp.bur(tb, s, q).act(r);
          const Policy alt = prescribed == Policy::x ? Policy::y : Policy::x;
          const double v0 =
              sim_detail::bureaucrat_action_value(sp, p, cont, tb, s, q, r, prescribed);
          const double v1 = sim_detail::bureaucrat_action_value(sp, p, cont, tb, s, q, r, alt);
          std::snprintf(buf, sizeof buf, "type=%s state=%s proposal=%s r=%.6g", to_string(tb),
                        to_string(s), to_string(q), r);
          record("bureaucrat", buf, v0, v1);
        }
      }
    }
  }

  // Voter: the informative-equilibrium rule must be a best reply to the
  // profile-implied joint posterior over both policymakers' types.
  {
    double joint[2][2][2] = {};  // [p1][thP][thB]
    for (State s1 : {State::x, State::y}) {
      const double ws = s1 == State::x ? p.rho : 1 - p.rho;
      for (PolicymakerType tp : {PolicymakerType::good, PolicymakerType::bad}) {
        const double wp = tp == PolicymakerType::good ? p.pi : 1 - p.pi;
        for (PolicymakerType tb : {PolicymakerType::good, PolicymakerType::bad}) {
          const double wb = tb == PolicymakerType::good ? p.beta : 1 - p.beta;
          std::array<RentBranch, 2> pb{};
          const int npb = rent_branches(sp.pol(tp, s1), p.rent_p1, &pb);
          for (int i = 0; i < npb; ++i) {
            std::array<RentBranch, 2> bb{};
            const int nbb = rent_branches(sp.bur(tb, s1, pb[i].action), p.rent_b1, &bb);
            for (int j = 0; j < nbb; ++j) {
              const double w0 = ws * wp * wb * pb[i].prob * bb[j].prob;
              if (pb[i].action == bb[j].action) {
                joint[idx(pb[i].action)][idx(tp)][idx(tb)] += w0;
              } else {
                joint[idx(bb[j].action)][idx(tp)][idx(tb)] += w0 * p.lambda;
                joint[idx(pb[i].action)][idx(tp)][idx(tb)] += w0 * (1 - p.lambda);
              }
            }
          }
        }
      }
    }
    for (Policy p1 : {Policy::x, Policy::y}) {
      double tot = 0, good = 0, reelect_val = 0, replace_val = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double w = joint[idx(p1)][a][b];
          tot += w;
          if (a == 0) good += w;
          reelect_val += w * cont.cell[a][b].voter;
          replace_val += w * (p.pi * cont.cell[0][b].voter + (1 - p.pi) * cont.cell[1][b].voter);
        }
      if (tot <= 0) continue;  // policy unreachable under the profile
      const double posterior = good / tot;
      const bool prescribe_reelect = p1 == Policy::x;
      const double v_keep = p.delta * reelect_val / tot;
      const double v_swap = p.delta * replace_val / tot;
      const double v0 = prescribe_reelect ? v_keep : v_swap;
      const double v1 = prescribe_reelect ? v_swap : v_keep;
      std::snprintf(buf, sizeof buf, "p1=%s posterior=%.6g prior=%.6g", to_string(p1), posterior,
                    p.pi);
      record("voter", buf, v0, v1);
      if (p1 == Policy::x) {
        report.pi_v_x = posterior;
        if (posterior == p.pi) report.voter_knife_edge = true;
      } else {
        report.pi_v_y = posterior;
      }
    }
    report.voter_informative = report.pi_v_x > p.pi && report.pi_v_y < p.pi;
  }

  std::sort(report.deviations.begin(), report.deviations.end(),
            [](const auto& a, const auto& b) { return a.gain > b.gain; });
  report.passes = report.max_gain <= tol && report.voter_informative;
  return report;
}

}  // namespace polagency
