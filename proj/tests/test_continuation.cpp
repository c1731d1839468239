#include <catch_amalgamated.hpp>

#include "polagency/continuation.hpp"
#include "polagency/rng.hpp"

using namespace polagency;

namespace {

ModelParams symmetric_point(double rho, double pi, double beta, double lambda) {
  ModelParams p;
  p.rho = rho;
  p.pi = pi;
  p.beta = beta;
  p.lambda = lambda;
  return validate(p);
}

// Period-2 subgame Monte Carlo: draws the state, plays the dominant
// second-period proposals through the lottery, and averages one player's
// payoff. Independent of the closed-form tables.
struct Period2Mc {
  double mean = 0, se = 0;
};

template <typename Payoff>
Period2Mc run_period2(const ModelParams& p, PolicymakerType tp, PolicymakerType tb, int n,
                      std::uint64_t seed, Payoff payoff) {
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const State s2state = rng.next_bernoulli(p.rho) ? State::x : State::y;
    const Policy qp = period2_action(tp, s2state);
    const Policy qb = period2_action(tb, s2state);
    const Policy pol = qp == qb ? qp : (rng.next_uniform() < p.lambda ? qb : qp);
    const double r2p = rng.next_uniform() * p.rent_p2.upper_bound;
    const double r2b = rng.next_uniform() * p.rent_b2.upper_bound;
    const double v = payoff(pol, s2state, r2p, r2b);
    s += v;
    s2 += v * v;
  }
  Period2Mc out;
  out.mean = s / n;
  out.se = std::sqrt(std::fmax(0.0, (s2 - s * s / n) / (n - 1.0)) / n);
  return out;
}

double politician_payoff(const ModelParams& p, PolicymakerType tp, Policy pol, State s, double r2p) {
  return tp == PolicymakerType::good ? p.payoffs(pol, s) : (pol == Policy::y ? r2p : 0.0);
}

}  // namespace

TEST_CASE("period-2 actions") {
  REQUIRE(period2_action(PolicymakerType::good, State::x) == Policy::x);
  REQUIRE(period2_action(PolicymakerType::good, State::y) == Policy::y);
  REQUIRE(period2_action(PolicymakerType::bad, State::x) == Policy::y);
  REQUIRE(period2_action(PolicymakerType::bad, State::y) == Policy::y);
}

TEST_CASE("closed-form continuation examples") {
  {
    const ModelParams p = symmetric_point(0.5, 0.5, 0.5, 0.5);
    const ContinuationTable t = policymaker_continuations(p);
    REQUIRE(t.v_gb_gp == Catch::Approx(1.0).margin(1e-15));   // matching in both states
    REQUIRE(t.v_gb_bp == Catch::Approx(0.75).margin(1e-15));  // 1 - rho(1-lambda)
  }
  {
    const ModelParams p = symmetric_point(0.5, 0.5, 0.5, 0.0);
    const ContinuationTable t = policymaker_continuations(p);
    REQUIRE(t.v_bb_pi == Catch::Approx(0.75).margin(1e-15));  // mu[1 - pi rho(1-lambda)]
  }
}

TEST_CASE("voter continuation examples") {
  {
    const ModelParams p = symmetric_point(0.5, 0.5, 0.5, 0.5);
    const VoterContinuationTable w = voter_continuations(p);
    REQUIRE(w.w_gb_gp == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(w.w_bb_gp == Catch::Approx(0.75).margin(1e-15));
  }
  {
    ModelParams p = symmetric_point(0.5, 0.5, 0.5, 0.5);
    p.pi = 1.0 - 1e-12;
    const VoterContinuationTable w = voter_continuations(p);
    REQUIRE(w.w_gb_pi == Catch::Approx(w.w_gb_gp).margin(1e-11));
  }
}

TEST_CASE("difference identity and ordering on a random grid") {
  CounterRng rng(77, 0);
  for (int i = 0; i < 10000; ++i) {
    ModelParams p;
    p.rho = 0.01 + 0.98 * rng.next_uniform();
    p.pi = 0.01 + 0.98 * rng.next_uniform();
    p.beta = 0.01 + 0.98 * rng.next_uniform();
    p.lambda = rng.next_uniform();
    p.delta = 0.05 + 0.95 * rng.next_uniform();
    p.office_rent = -1 + 4 * rng.next_uniform();
    p.payoffs.v_xx = 0.5 + 3 * rng.next_uniform();
    p.payoffs.v_yy = 0.5 + 3 * rng.next_uniform();
    p.payoffs.v_yx = 0.4 * rng.next_uniform();
    p.payoffs.v_xy = 0.4 * rng.next_uniform();
    const ContinuationTable t = policymaker_continuations(validate(p));
    const double gap = p.rho * p.lambda * (p.payoffs.v_xx - p.payoffs.v_yx);
    REQUIRE(t.v_gp_gb - t.v_gp_bb == Catch::Approx(gap).margin(1e-12));
    REQUIRE(t.u_gp_gb - t.u_gp_bb == Catch::Approx(gap).margin(1e-12));
    REQUIRE(t.v_gb_gp >= t.v_gb_pi);
    REQUIRE(t.v_gb_pi >= t.v_gb_bp);
    // re-election beats replacement whenever office rents are not deeply
    // negative; the gap is rho(1-pi)(1-lambda)(v_xx - v_yx) + E
    if (p.office_rent >= 0) REQUIRE(t.v_gp_gb > t.u_gp_gb);
  }
}

TEST_CASE("tables match the period-2 subgame Monte Carlo within 3 standard errors") {
  const ModelParams p = [] {
    ModelParams q;
    q.rho = 0.6;
    q.pi = 0.35;
    q.beta = 0.7;
    q.lambda = 0.45;
    q.delta = 0.9;
    q.office_rent = 0.8;
    q.payoffs = {.v_xx = 1.3, .v_xy = 0.1, .v_yx = 0.2, .v_yy = 1.1};
    return validate(q);
  }();
  const ContinuationTable t = policymaker_continuations(p);
  const VoterContinuationTable w = voter_continuations(p);
  const int n = 1'000'000;

  struct Case {
    PolicymakerType office;  // type of the period-2 politician
    double expected;
    int player;  // 0 voter/goodB, 1 badB, 2 goodP (policy part), 3 badP rents
    std::uint64_t seed;
  };
  auto check = [&](PolicymakerType tp, PolicymakerType tb, double expected, int player,
                   std::uint64_t seed) {
    auto mc = run_period2(p, tp, tb, n, seed, [&](Policy pol, State s, double r2p, double r2b) {
      switch (player) {
        case 0: return p.payoffs(pol, s);
        case 1: return pol == Policy::y ? r2b : 0.0;
        case 2: return politician_payoff(p, PolicymakerType::good, pol, s, r2p);
        default: return politician_payoff(p, PolicymakerType::bad, pol, s, r2p);
      }
    });
    INFO("player " << player << " expected " << expected << " got " << mc.mean << " se " << mc.se);
    REQUIRE(std::abs(mc.mean - expected) < 3 * mc.se + 1e-12);
  };

  check(PolicymakerType::good, PolicymakerType::good, t.v_gb_gp, 0, 11);
  check(PolicymakerType::bad, PolicymakerType::good, t.v_gb_bp, 0, 12);
  check(PolicymakerType::good, PolicymakerType::bad, t.v_bb_gp, 1, 13);
  check(PolicymakerType::bad, PolicymakerType::bad, t.v_bb_bp, 1, 14);
  check(PolicymakerType::good, PolicymakerType::good, t.v_gp_gb - p.office_rent, 2, 15);
  check(PolicymakerType::good, PolicymakerType::bad, t.v_gp_bb - p.office_rent, 2, 16);
  check(PolicymakerType::bad, PolicymakerType::good, t.v_bp_gb - p.office_rent, 3, 17);
  check(PolicymakerType::bad, PolicymakerType::bad, t.v_bp_bb - p.office_rent, 3, 18);
  // voter rows
  check(PolicymakerType::good, PolicymakerType::bad, w.w_bb_gp, 0, 19);
  check(PolicymakerType::bad, PolicymakerType::bad, w.w_bb_bp, 0, 20);
}
