#include <catch_amalgamated.hpp>

#include "polagency/rng.hpp"
#include "polagency/simulator.hpp"
#include "polagency/welfare.hpp"

using namespace polagency;

namespace {

ModelParams point(double rho, double pi, double beta, double lambda, double E = 1.0,
                  double v_xx = 1.0) {
  ModelParams p;
  p.rho = rho;
  p.pi = pi;
  p.beta = beta;
  p.lambda = lambda;
  p.office_rent = E;
  p.payoffs.v_xx = v_xx;
  return validate(p);
}

// certified points of the two subversive classes (thin regions)
ModelParams fsv_point() { return point(0.68, 0.78, 0.18, 0.824, -0.42, 50.0); }
ModelParams asv_point() { return point(0.7, 0.45, 0.6, 0.8, 0.7, 500.0); }

}  // namespace

TEST_CASE("profile rules per class") {
  const ModelParams p = point(0.85, 0.7, 0.5, 0.5);
  const StrategyProfile pecb = build_profile(EquilibriumClass::PECB, p);
  REQUIRE(pecb.pol(PolicymakerType::good, State::x).kind == RuleKind::always_x);
  REQUIRE(pecb.pol(PolicymakerType::good, State::y).kind == RuleKind::always_x);
  // bad bureaucrat mixes after q = y with the continuation-rent threshold
  const ActionRule bb = pecb.bur(PolicymakerType::bad, State::x, Policy::y);
  REQUIRE(bb.kind == RuleKind::threshold_x);
  REQUIRE(bb.tau == Catch::Approx(bad_bureaucrat_threshold(p)).margin(1e-15));
  REQUIRE(pecb.bur(PolicymakerType::bad, State::y, Policy::x).kind == RuleKind::always_y);

  const ModelParams q = point(0.85, 0.7, 0.9, 0.6, 0.85);
  const StrategyProfile sf = build_profile(EquilibriumClass::NPE_SF, q);
  REQUIRE(sf.pol(PolicymakerType::good, State::x).kind == RuleKind::always_x);
  REQUIRE(sf.pol(PolicymakerType::good, State::y).kind == RuleKind::always_y);
  // stand-firm: the good bureaucrat matches the state everywhere
  REQUIRE(sf.bur(PolicymakerType::good, State::y, Policy::y).kind == RuleKind::always_y);
  // bad bureaucrat mixes only after a state-mismatched proposal
  REQUIRE(sf.bur(PolicymakerType::bad, State::y, Policy::y).kind == RuleKind::always_y);
  REQUIRE(sf.bur(PolicymakerType::bad, State::y, Policy::x).kind == RuleKind::threshold_x);

  // subversive classes: the good bureaucrat contests a state-matching y to
  // force re-election; ASV inverts the bad politician's state-y cutoff
  const StrategyProfile fsv = build_profile(EquilibriumClass::NPE_FSV, fsv_point());
  REQUIRE(fsv.bur(PolicymakerType::good, State::y, Policy::y).kind == RuleKind::always_x);
  REQUIRE(fsv.bur(PolicymakerType::good, State::y, Policy::x).kind == RuleKind::always_y);
  REQUIRE(fsv.pol(PolicymakerType::bad, State::y).kind == RuleKind::threshold_x);
  const StrategyProfile asv = build_profile(EquilibriumClass::NPE_ASV, asv_point());
  REQUIRE(asv.bur(PolicymakerType::good, State::y, Policy::y).kind == RuleKind::always_x);
  REQUIRE(asv.pol(PolicymakerType::bad, State::y).kind == RuleKind::inverse_threshold_x);
}

TEST_CASE("profile mixing reproduces the belief probabilities exactly") {
  for (auto [cls, base] : {std::pair{EquilibriumClass::PECB, point(0.85, 0.7, 0.5, 0.5)},
                           std::pair{EquilibriumClass::NPE_SF, point(0.85, 0.7, 0.9, 0.6, 0.85)}}) {
    const BeliefProfile b = beliefs_for(cls, base);
    const StrategyProfile sp = build_profile(cls, base);
    REQUIRE(sp.pol(PolicymakerType::bad, State::x).prob_x(base.rent_p1) ==
            Catch::Approx(b.gamma_x).margin(1e-15));
    REQUIRE(sp.pol(PolicymakerType::bad, State::y).prob_x(base.rent_p1) ==
            Catch::Approx(b.gamma_y).margin(1e-15));
  }
}

TEST_CASE("uncertified class refuses to build and carries the certificate") {
  const ModelParams p = point(0.85, 0.7, 0.9, 0.3, 0.85);  // below ell: NPE-SF fails
  try {
    build_profile(EquilibriumClass::NPE_SF, p);
    FAIL("expected CertificationError");
  } catch (const CertificationError& e) {
    REQUIRE_FALSE(e.certificate().verdict);
    REQUIRE_FALSE(e.certificate().find("office-rents")->satisfied);
  }
}

TEST_CASE("degenerate always-y profile has closed-form welfare") {
  const ModelParams p = point(0.4, 0.5, 0.5, 0.5);
  StrategyProfile sp = build_profile_unchecked(EquilibriumClass::PECB, p);
  for (int t : {0, 1})
    for (int s : {0, 1}) {
      sp.politician[t][s] = {RuleKind::always_y, 0};
      for (int q : {0, 1}) sp.bureaucrat[t][s][q] = {RuleKind::always_y, 0};
    }
  const ExpectedOutcome eo = exact_expected_utilities(sp, p);
  // policy y in period 1, incumbent ousted; period 2 plays the usual subgame
  REQUIRE(eo.prob_x == 0.0);
  const VoterContinuationTable w = voter_continuations(p);
  const double expect =
      (1 - p.rho) + p.delta * (p.beta * w.w_gb_pi + (1 - p.beta) * w.w_bb_pi);
  REQUIRE(eo.voter_eu == Catch::Approx(expect).margin(1e-12));
}

TEST_CASE("simulation is deterministic and thread-count independent") {
  const ModelParams p = point(0.85, 0.7, 0.5, 0.5);
  const StrategyProfile sp = build_profile(EquilibriumClass::PECB, p);
  const SimulationResult a = simulate(sp, p, 200000, 7, 1);
  const SimulationResult b = simulate(sp, p, 200000, 7, 4);
  REQUIRE(a.voter_mean == b.voter_mean);
  REQUIRE(a.politician_mean == b.politician_mean);
  REQUIRE(a.bureaucrat_mean == b.bureaucrat_mean);
  REQUIRE(a.prob_x_hat == b.prob_x_hat);
  const SimulationResult c = simulate(sp, p, 200000, 8, 1);
  REQUIRE(c.voter_mean != a.voter_mean);  // seed matters
}

TEST_CASE("single replication flags degenerate standard errors") {
  const ModelParams p = point(0.85, 0.7, 0.5, 0.5);
  const StrategyProfile sp = build_profile(EquilibriumClass::PECB, p);
  const SimulationResult r = simulate(sp, p, 1, 3);
  REQUIRE(r.degenerate_se);
  REQUIRE(std::isnan(r.voter_se));
}

TEST_CASE("Monte Carlo agrees with the exact evaluator within 3 standard errors") {
  for (auto [cls, p] : {std::pair{EquilibriumClass::PECB, point(0.85, 0.7, 0.5, 0.5)},
                        std::pair{EquilibriumClass::PEPB, point(0.5, 0.5, 0.5, 0.3, 1.0, 500.0)},
                        std::pair{EquilibriumClass::NPE_SF, point(0.85, 0.7, 0.9, 0.6, 0.85)},
                        std::pair{EquilibriumClass::NPE_FSV, fsv_point()},
                        std::pair{EquilibriumClass::NPE_ASV, asv_point()}}) {
    const StrategyProfile sp = build_profile(cls, p);
    const ExpectedOutcome eo = exact_expected_utilities(sp, p);
    // steep payoff matrices need more replications for comparable SEs
    const std::uint64_t n = p.payoffs.v_xx > 10 ? 4'000'000 : 1'000'000;
    const SimulationResult sim = simulate(sp, p, n, 424242);
    INFO(to_string(cls));
    REQUIRE(std::abs(sim.voter_mean - eo.voter_eu) < 3 * sim.voter_se);
    REQUIRE(std::abs(sim.politician_mean - eo.politician_eu) < 3 * sim.politician_se);
    REQUIRE(std::abs(sim.bureaucrat_mean - eo.bureaucrat_eu) < 3 * sim.bureaucrat_se);
    const double se_px = std::sqrt(eo.prob_x * (1 - eo.prob_x) / static_cast<double>(sim.n));
    REQUIRE(std::abs(sim.prob_x_hat - eo.prob_x) < 3 * se_px);
    // empirical posterior vs the beliefs module
    const BeliefProfile b = beliefs_for(cls, p);
    const double se_post = std::sqrt(b.pi_v_x * (1 - b.pi_v_x) /
                                     (eo.prob_x * static_cast<double>(sim.n)));
    REQUIRE(std::abs(sim.posterior_x_hat - b.pi_v_x) < 3 * se_post);
  }
}

TEST_CASE("profile-implied posteriors equal the beliefs module") {
  for (auto [cls, p] :
       {std::pair{EquilibriumClass::PECB, point(0.85, 0.7, 0.5, 0.5)},
        std::pair{EquilibriumClass::PEPB, point(0.5, 0.5, 0.5, 0.3, 1.0, 500.0)},
        std::pair{EquilibriumClass::NPE_SF, point(0.85, 0.7, 0.9, 0.6, 0.85)}}) {
    const StrategyProfile sp = build_profile(cls, p);
    const BeliefProfile b = beliefs_for(cls, p);
    const DeviationReport d = best_response_audit(sp, p);
    REQUIRE(d.pi_v_x == Catch::Approx(b.pi_v_x).margin(1e-12));
    REQUIRE(d.pi_v_y == Catch::Approx(b.pi_v_y).margin(1e-12));
    for (State s : {State::x, State::y})
      for (Policy q : {Policy::x, Policy::y}) {
        const double from_profile = sim_detail::profile_posterior_good(sp, p, s, q);
        REQUIRE(from_profile == Catch::Approx(b.pi_b(q, s)).margin(1e-12));
      }
  }
}

TEST_CASE("certified profiles survive the audit") {
  for (auto [cls, p] : {std::pair{EquilibriumClass::PECB, point(0.85, 0.7, 0.5, 0.5)},
                        std::pair{EquilibriumClass::PECB, point(0.5, 0.5, 0.25, 0.8)},
                        std::pair{EquilibriumClass::PEPB, point(0.5, 0.5, 0.5, 0.3, 1.0, 500.0)},
                        std::pair{EquilibriumClass::NPE_SF, point(0.85, 0.7, 0.9, 0.6, 0.85)},
                        std::pair{EquilibriumClass::NPE_SF, point(0.85, 0.7, 0.75, 0.8, 0.85)},
                        std::pair{EquilibriumClass::NPE_FSV, fsv_point()},
                        std::pair{EquilibriumClass::NPE_ASV, asv_point()}}) {
    const StrategyProfile sp = build_profile(cls, p);
    const DeviationReport d = best_response_audit(sp, p);
    INFO(to_string(cls) << " max gain " << d.max_gain
                        << (d.deviations.empty() ? "" : " at " + d.deviations[0].info_set));
    REQUIRE(d.passes);
    REQUIRE(d.max_gain <= 1e-10);
    REQUIRE(d.voter_informative);
  }
}

TEST_CASE("indifference at the rent threshold produces zero gain") {
  const ModelParams p = point(0.85, 0.7, 0.5, 0.5);
  const StrategyProfile sp = build_profile(EquilibriumClass::PECB, p);
  const sim_detail::Continuations cont(p);
  const double tau = sp.bur(PolicymakerType::bad, State::x, Policy::y).tau;
  const double vx = sim_detail::bureaucrat_action_value(sp, p, cont, PolicymakerType::bad,
                                                        State::x, Policy::y, tau, Policy::x);
  const double vy = sim_detail::bureaucrat_action_value(sp, p, cont, PolicymakerType::bad,
                                                        State::x, Policy::y, tau, Policy::y);
  REQUIRE(vx == Catch::Approx(vy).margin(1e-12));

  const double tp = sp.pol(PolicymakerType::bad, State::x).tau;
  const double px = sim_detail::politician_action_value(sp, p, cont, PolicymakerType::bad,
                                                        State::x, tp, Policy::x);
  const double py = sim_detail::politician_action_value(sp, p, cont, PolicymakerType::bad,
                                                        State::x, tp, Policy::y);
  REQUIRE(px == Catch::Approx(py).margin(1e-12));
}

TEST_CASE("violating the pandering condition moves the good politician") {
  // E below the pandering bound: the PECB profile is not a best reply in
  // state y for the good politician
  const ModelParams p = point(0.85, 0.7, 0.9, 0.6, 0.85);  // NPE-SF territory
  const StrategyProfile sp = build_profile_unchecked(EquilibriumClass::PECB, p);
  const DeviationReport d = best_response_audit(sp, p);
  REQUIRE_FALSE(d.passes);
  bool found = false;
  for (const auto& e : d.deviations)
    if (e.player == "politician" && e.info_set.find("type=good state=y") != std::string::npos)
      found = true;
  REQUIRE(found);
}

TEST_CASE("breaking informativeness fails the voter audit") {
  // rho below rho_hat: policy x no longer signals a good politician
  ModelParams p = point(0.55, 0.7, 0.9, 0.6, 0.85);
  const EquilibriumCertificate cert = certify(EquilibriumClass::NPE_SF, p);
  REQUIRE_FALSE(cert.find("state-likelihood")->satisfied);
  const StrategyProfile sp = build_profile_unchecked(EquilibriumClass::NPE_SF, p);
  const DeviationReport d = best_response_audit(sp, p);
  REQUIRE_FALSE(d.voter_informative);
  REQUIRE(d.pi_v_x <= p.pi);
  REQUIRE_FALSE(d.passes);
}

TEST_CASE("breaking the mismatch condition moves the good bureaucrat") {
  // PECB with tiny Delta: the good bureaucrat prefers confirming x in state y
  const ModelParams p = point(0.5, 0.5, 0.5, 0.3, 1.0, 500.0);
  const EquilibriumCertificate cert = certify(EquilibriumClass::PECB, p);
  REQUIRE_FALSE(cert.find("mismatch-costs")->satisfied);
  const StrategyProfile sp = build_profile_unchecked(EquilibriumClass::PECB, p);
  const DeviationReport d = best_response_audit(sp, p);
  REQUIRE_FALSE(d.passes);
  bool found = false;
  for (const auto& e : d.deviations)
    if (e.player == "bureaucrat" && e.info_set.find("type=good state=y proposal=x") !=
                                        std::string::npos)
      found = true;
  REQUIRE(found);
}

TEST_CASE("auditor rejects too-small rent grids") {
  const ModelParams p = point(0.85, 0.7, 0.5, 0.5);
  const StrategyProfile sp = build_profile(EquilibriumClass::PECB, p);
  REQUIRE_THROWS_AS(best_response_audit(sp, p, 1), std::invalid_argument);
}
