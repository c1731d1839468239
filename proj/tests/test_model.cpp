#include <catch_amalgamated.hpp>

#include "polagency/model.hpp"
#include "polagency/rng.hpp"

using namespace polagency;

namespace {

ModelParams interior_point() {
  ModelParams p;
  p.rho = p.pi = p.beta = p.lambda = 0.5;
  p.delta = 1.0;
  p.office_rent = 1.0;
  return p;
}

}  // namespace

TEST_CASE("validate accepts an interior point") {
  REQUIRE_NOTHROW(validate(interior_point()));
}

TEST_CASE("validate names the first violated invariant") {
  ModelParams p = interior_point();
  p.payoffs.v_xx = p.payoffs.v_yx = 1.0;
  REQUIRE_THROWS_WITH(validate(p), Catch::Matchers::ContainsSubstring("payoff monotonicity"));

  p = interior_point();
  p.lambda = 1.2;
  REQUIRE_THROWS_WITH(validate(p), Catch::Matchers::ContainsSubstring("probability range"));

  p = interior_point();
  p.rent_b1.upper_bound = -1.0;
  REQUIRE_THROWS_WITH(validate(p), Catch::Matchers::ContainsSubstring("rent bound"));

  p = interior_point();
  p.delta = 0.0;
  REQUIRE_THROWS_WITH(validate(p), Catch::Matchers::ContainsSubstring("discount range"));
}

TEST_CASE("lambda endpoints validate but interior-only operations reject them") {
  ModelParams p = interior_point();
  p.lambda = 0.0;
  REQUIRE_NOTHROW(validate(p));
  p.lambda = 1.0;
  REQUIRE_NOTHROW(validate(p));
  REQUIRE_THROWS_AS(require_interior_lambda(p, "op"), EndpointLambdaError);
  REQUIRE_THROWS_AS(require_lambda_below_one(p, "op"), EndpointLambdaError);
}

TEST_CASE("mismatch ratio") {
  PayoffMatrix v;  // unit symmetric
  REQUIRE(mismatch_ratio(v) == 1.0);

  v.v_xx = 500.0;
  REQUIRE(mismatch_ratio(v) == 1.0 / 500.0);

  // equal mismatch costs with offsets
  PayoffMatrix w{.v_xx = 3.5, .v_xy = 1.25, .v_yx = 2.0, .v_yy = 2.75};
  REQUIRE(mismatch_ratio(w) == Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("uniform rent cdf and quantile") {
  RentSpec r;  // U[0,2]
  REQUIRE(r.cdf(1.0) == 0.5);
  REQUIRE(r.cdf(0.2975) == 0.14875);
  REQUIRE(r.quantile(0.5) == 1.0);
  REQUIRE(r.cdf(0.0) == 0.0);
  REQUIRE(r.cdf(r.upper_bound) == 1.0);
  REQUIRE(r.cdf(-3.0) == 0.0);
  REQUIRE(r.cdf(7.0) == 1.0);
  REQUIRE_THROWS_AS(r.quantile(-0.1), std::domain_error);
  REQUIRE_THROWS_AS(r.quantile(1.1), std::domain_error);
}

TEST_CASE("cdf is monotone and inverts quantile on a grid") {
  RentSpec r;
  r.upper_bound = 3.7;
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double q = static_cast<double>(i) / 1000;
    const double c = r.cdf(r.quantile(q));
    REQUIRE(c == Catch::Approx(q).margin(1e-15));
    REQUIRE(c >= prev);
    prev = c;
  }
}

TEST_CASE("cdf value matches the empirical cdf of uniform draws") {
  // independent check of F(0.2975) = 0.14875 on U[0,2]
  RentSpec r;
  CounterRng rng(20240901, 0);
  const int n = 1'000'000;
  int below = 0;
  for (int i = 0; i < n; ++i)
    if (rng.next_uniform() * r.upper_bound < 0.2975) ++below;
  const double phat = static_cast<double>(below) / n;
  const double se = std::sqrt(0.14875 * (1 - 0.14875) / n);
  REQUIRE(std::abs(phat - r.cdf(0.2975)) < 3 * se);
}

TEST_CASE("clamp01 mirrors the min/max wrapper") {
  REQUIRE(clamp01(-0.2) == 0.0);
  REQUIRE(clamp01(0.4) == 0.4);
  REQUIRE(clamp01(1.7) == 1.0);
}
