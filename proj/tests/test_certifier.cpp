#include <catch_amalgamated.hpp>

#include "polagency/certifier.hpp"
#include "polagency/rng.hpp"

using namespace polagency;

namespace {

ModelParams point(double rho, double pi, double beta, double lambda, double E = 1.0,
                  double v_xx = 1.0, double delta = 1.0) {
  ModelParams p;
  p.rho = rho;
  p.pi = pi;
  p.beta = beta;
  p.lambda = lambda;
  p.delta = delta;
  p.office_rent = E;
  p.payoffs.v_xx = v_xx;
  return validate(p);
}

ModelParams fig4_point(double lambda, double beta = 0.9) {
  return point(0.85, 0.7, beta, lambda, 0.85);
}

bool verdict(EquilibriumClass c, const ModelParams& p) { return certify(c, p).verdict; }

}  // namespace

TEST_CASE("threshold examples") {
  {
    // mu_bar: quantile(0.5) = 1 over delta pi rho (1-lambda) = 0.05
    const ModelParams p = point(0.5, 0.5, 0.5, 0.8);
    const ThresholdSet t = thresholds(EquilibriumClass::PECB, p);
    REQUIRE(t.mu_bar_pe == Catch::Approx(20.0).margin(1e-12));
  }
  {
    const ModelParams p = fig4_point(0.5);
    const ThresholdSet t = thresholds(EquilibriumClass::NPE_SF, p);
    REQUIRE(t.ell == Catch::Approx(7.0 / 17.0).margin(1e-15));
    REQUIRE(t.ell == Catch::Approx(0.41176).margin(5e-6));
  }
  {
    // delta_cb at gamma = 1/2: need a bundle whose PECB gamma is exactly 1/2.
    // delta rho (1-lambda) (PiB - pi) with PiB = 2/3 gives 1/24.
    const double dfac = 1.0 * 0.5 * (1 - 0.5);
    const double pib = 0.5 / (0.5 + 0.5 * 0.5);
    REQUIRE(dfac * (pib - 0.5) == Catch::Approx(1.0 / 24.0).margin(1e-15));
  }
}

TEST_CASE("thresholds surface the pandering boundary functions") {
  const ModelParams p = point(0.5, 0.5, 0.25, 0.3);
  const ThresholdSet t = thresholds(EquilibriumClass::PECB, p);
  // unit-payoff configuration: g = 1 - rho(1-pi)(1-lambda), f = 1 + correction
  REQUIRE(t.g_fun == Catch::Approx(1 - 0.5 * 0.5 * 0.7).margin(1e-12));
  REQUIRE(t.f_fun > 1.0);
  REQUIRE(t.pandering_rhs == Catch::Approx(t.g_fun).margin(1e-15));
  REQUIRE(t.p_value == Catch::Approx(t.pandering_rhs - p.office_rent).margin(1e-15));
}

TEST_CASE("PECB holds across interior lambda in the baseline configuration") {
  for (double lambda : {0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95}) {
    for (double rho : {0.3, 0.5, 0.8}) {
      for (double pi : {0.3, 0.6}) {
        for (double beta : {0.25, 0.5, 0.75}) {
          const ModelParams p = point(rho, pi, beta, lambda);
          INFO("lambda " << lambda << " rho " << rho << " pi " << pi << " beta " << beta);
          REQUIRE(verdict(EquilibriumClass::PECB, p));
        }
      }
    }
  }
}

TEST_CASE("NPE-SF flips with the office-rent condition at ell") {
  // ell is about 0.41176 for the E = .85 configuration
  const EquilibriumCertificate low = certify(EquilibriumClass::NPE_SF, fig4_point(0.3));
  REQUIRE_FALSE(low.verdict);
  REQUIRE_FALSE(low.find("office-rents")->satisfied);

  const EquilibriumCertificate high = certify(EquilibriumClass::NPE_SF, fig4_point(0.6));
  REQUIRE(high.verdict);
  for (const auto& cond : high.conditions) {
    INFO(cond.name);
    REQUIRE(cond.satisfied);
    REQUIRE(cond.slack > 0.0);
  }

  REQUIRE(verdict(EquilibriumClass::PECB, fig4_point(0.3)));
  REQUIRE_FALSE(verdict(EquilibriumClass::PECB, fig4_point(0.6)));
}

TEST_CASE("classify_all on the coexistence configuration") {
  // inside the PEPB band both pandering classes certify
  const ModelParams mid = point(0.5, 0.5, 0.5, 0.14, 1.0, 500.0);
  const auto certs = classify_all(mid);
  REQUIRE(certs.size() == 5);
  bool pecb = false, pepb = false;
  for (const auto& c : certs) {
    if (c.eq_class == EquilibriumClass::PECB) pecb = c.verdict;
    if (c.eq_class == EquilibriumClass::PEPB) pepb = c.verdict;
  }
  REQUIRE(pecb);
  REQUIRE(pepb);

  // PEPB dies near the lambda extremes
  REQUIRE_FALSE(verdict(EquilibriumClass::PEPB, point(0.5, 0.5, 0.5, 0.01, 1.0, 500.0)));
  REQUIRE_FALSE(verdict(EquilibriumClass::PEPB, point(0.5, 0.5, 0.5, 0.99, 1.0, 500.0)));
}

TEST_CASE("E = 1 keeps every non-pandering class off") {
  for (double lambda : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const ModelParams p = point(0.5, 0.5, 0.5, lambda);
    REQUIRE_FALSE(verdict(EquilibriumClass::NPE_SF, p));
    REQUIRE_FALSE(verdict(EquilibriumClass::NPE_FSV, p));
    REQUIRE_FALSE(verdict(EquilibriumClass::NPE_ASV, p));
  }
}

TEST_CASE("high lambda with E = .85 selects NPE-SF over PECB") {
  const ModelParams p = fig4_point(0.97);
  REQUIRE_FALSE(verdict(EquilibriumClass::PECB, p));
  REQUIRE(verdict(EquilibriumClass::NPE_SF, p));
}

TEST_CASE("pandering and non-pandering office-rent conditions exclude each other") {
  CounterRng rng(31, 0);
  for (int i = 0; i < 5000; ++i) {
    ModelParams p;
    p.rho = 0.02 + 0.96 * rng.next_uniform();
    p.pi = 0.02 + 0.96 * rng.next_uniform();
    p.beta = 0.02 + 0.96 * rng.next_uniform();
    p.lambda = 0.02 + 0.96 * rng.next_uniform();
    p.office_rent = -1 + 3 * rng.next_uniform();
    p.payoffs.v_xx = 0.5 + 2 * rng.next_uniform();
    p = validate(p);
    const auto pecb = certify(EquilibriumClass::PECB, p);
    const auto npesf = certify(EquilibriumClass::NPE_SF, p);
    const bool pander_ok = pecb.find("office-rents")->satisfied;
    const bool nopander_ok = npesf.find("office-rents")->satisfied;
    REQUIRE(pander_ok != nopander_ok);  // complementary weak/strict pair
  }
}

TEST_CASE("PECB mismatch condition is implied by Delta >= 1 with delta < 1") {
  CounterRng rng(32, 0);
  for (int i = 0; i < 2000; ++i) {
    ModelParams p;
    p.rho = 0.02 + 0.96 * rng.next_uniform();
    p.pi = 0.02 + 0.96 * rng.next_uniform();
    p.beta = 0.02 + 0.96 * rng.next_uniform();
    p.lambda = 0.02 + 0.96 * rng.next_uniform();
    p.delta = 0.05 + 0.9 * rng.next_uniform();
    p.payoffs.v_yy = 1.0 + 2 * rng.next_uniform();  // Delta >= 1
    p = validate(p);
    REQUIRE(certify(EquilibriumClass::PECB, p).find("mismatch-costs")->satisfied);
  }
}

TEST_CASE("subversive window consistency") {
  CounterRng rng(33, 0);
  int checked = 0;
  for (int i = 0; i < 4000; ++i) {
    ModelParams p;
    p.rho = 0.1 + 0.85 * rng.next_uniform();
    p.pi = 0.1 + 0.8 * rng.next_uniform();
    p.beta = 0.1 + 0.8 * rng.next_uniform();
    p.lambda = 0.05 + 0.9 * rng.next_uniform();
    p.office_rent = rng.next_uniform();
    p = validate(p);
    const ThresholdSet t = thresholds(EquilibriumClass::NPE_ASV, p);
    // psi_star < psi_tilde iff lambda > 1/2
    if (p.lambda > 0.5)
      REQUIRE(t.psi_star < t.psi_tilde);
    else if (p.lambda < 0.5)
      REQUIRE(t.psi_star >= t.psi_tilde);
    if (std::isfinite(t.lambda_star) && std::isfinite(t.lambda_prime)) {
      ++checked;
      REQUIRE(t.lambda_star > 0.5);
      REQUIRE(t.lambda_star < 1.0);
      REQUIRE(t.lambda_prime > t.lambda_star);
      REQUIRE(t.lambda_prime < 1.0);
      REQUIRE(t.lambda_prime > 2.0 / (2.0 + p.beta));
    }
  }
  REQUIRE(checked > 1000);
}

TEST_CASE("lambda_star marks the sign change of psi_star") {
  const ModelParams base = point(0.7, 0.45, 0.6, 0.6, 0.6, 500.0);
  const ThresholdSet t0 = thresholds(EquilibriumClass::NPE_ASV, base);
  REQUIRE(std::isfinite(t0.lambda_star));
  for (double eps : {1e-4, 1e-3}) {
    ModelParams lo = base;
    lo.lambda = t0.lambda_star - eps;
    ModelParams hi = base;
    hi.lambda = t0.lambda_star + eps;
    REQUIRE(thresholds(EquilibriumClass::NPE_ASV, validate(lo)).psi_star < 0.0);
    REQUIRE(thresholds(EquilibriumClass::NPE_ASV, validate(hi)).psi_star > 0.0);
  }
}

TEST_CASE("bisection finds the pandering boundary at ell") {
  const ModelParams base = fig4_point(0.5);
  const double star =
      find_condition_boundary(EquilibriumClass::PECB, base, "office-rents", 0.05, 0.95);
  REQUIRE(star == Catch::Approx(ell_threshold(base)).margin(1e-9));

  // same boundary from the non-pandering side
  const double star2 =
      find_condition_boundary(EquilibriumClass::NPE_SF, base, "office-rents", 0.05, 0.95);
  REQUIRE(star2 == Catch::Approx(star).margin(1e-9));
}

TEST_CASE("bisection locates the PEPB mismatch boundary") {
  const ModelParams base = point(0.5, 0.5, 0.5, 0.5, 1.0, 500.0);
  const double lo =
      find_condition_boundary(EquilibriumClass::PEPB, base, "mismatch-costs", 0.01, 0.5);
  const double hi =
      find_condition_boundary(EquilibriumClass::PEPB, base, "mismatch-costs", 0.5, 0.99);
  REQUIRE(lo > 0.01);
  REQUIRE(hi < 0.99);
  REQUIRE(lo < hi);
  ModelParams inside = base;
  inside.lambda = 0.5 * (lo + hi);
  REQUIRE(certify(EquilibriumClass::PEPB, validate(inside)).find("mismatch-costs")->satisfied);
}

TEST_CASE("certificate structure") {
  const ModelParams p = point(0.5, 0.5, 0.5, 0.5);
  const EquilibriumCertificate c = certify(EquilibriumClass::PECB, p);
  REQUIRE(c.conditions.size() == 4);
  bool all = true;
  for (const auto& cond : c.conditions) all = all && cond.satisfied;
  REQUIRE(c.verdict == all);
  // slack sign convention: positive iff satisfied (weak conditions may sit at 0)
  for (const auto& cond : c.conditions) {
    if (cond.satisfied)
      REQUIRE(cond.slack >= 0.0);
    else
      REQUIRE(cond.slack <= 0.0);
  }
  REQUIRE_THROWS_AS(certify(EquilibriumClass::PECB, [&] {
                      ModelParams q = p;
                      q.lambda = 1.0;
                      return q;
                    }()),
                    EndpointLambdaError);
}
