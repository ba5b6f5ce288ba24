#include <cmath>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "json.hpp"
#include "rbsde/oracle.hpp"
#include "rbsde/time_grid.hpp"
#include "test_util.hpp"

using namespace rbsde;

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double black_scholes_put(double s0, double k, double r, double sigma, double t) {
  const double sq = sigma * std::sqrt(t);
  const double d1 = (std::log(s0 / k) + (r + 0.5 * sigma * sigma) * t) / sq;
  const double d2 = d1 - sq;
  return k * std::exp(-r * t) * norm_cdf(-d2) - s0 * norm_cdf(-d1);
}

AmericanPutSpec atm_spec(int steps) {
  AmericanPutSpec spec;
  spec.spot = 100.0;
  spec.strike = 100.0;
  spec.rate = 0.06;
  spec.sigma = 0.2;
  spec.horizon = 0.5;
  spec.steps = steps;
  return spec;
}

}  // namespace

TEST_CASE("linear value is the discounted mean terminal value") {
  const TimeGrid grid = build_time_grid(1.0, 200);
  const double v = linear_bsde_value([](double) { return 0.05; }, 1.0, grid);
  CHECK(v == doctest::Approx(std::exp(-0.05)).epsilon(1e-13));

  // Zero rate discounts nothing.
  CHECK(linear_bsde_value([](double) { return 0.0; }, 0.7, grid) == 0.7);
}

TEST_CASE("linear value uses the left-endpoint quadrature") {
  // r(t) = t: the left-endpoint sum is (N-1)/(2N), strictly below 1/2, so the
  // value sits just above the continuum e^{-1/2} and converges from above.
  const TimeGrid grid = build_time_grid(1.0, 1000);
  const double v = linear_bsde_value([](double t) { return t; }, 1.0, grid);
  CHECK(v > std::exp(-0.5));
  CHECK(v < std::exp(-0.499));
  CHECK(std::fabs(v - std::exp(-0.5)) <= 1e-3);
}

TEST_CASE("tree put collapses to intrinsic value as volatility vanishes") {
  AmericanPutSpec spec;
  spec.spot = 80.0;
  spec.strike = 100.0;
  spec.rate = 1e-12;
  spec.sigma = 1e-8;
  spec.horizon = 1.0;
  spec.steps = 64;
  CHECK(crr_american_put(spec) == doctest::Approx(20.0).epsilon(1e-6));
}

TEST_CASE("deep out-of-the-money put is worthless") {
  AmericanPutSpec spec;
  spec.spot = 1000.0;
  spec.strike = 100.0;
  spec.rate = 0.01;
  spec.sigma = 0.05;
  spec.horizon = 0.1;
  spec.steps = 200;
  CHECK(crr_american_put(spec) == 0.0);
}

TEST_CASE("early exercise carries a strict premium at the money") {
  const AmericanPutSpec spec = atm_spec(100);
  const double american = crr_american_put(spec);
  const double european = crr_european_put(spec);
  CHECK(american > european);
  CHECK(european > 0.0);
}

TEST_CASE("european tree agrees with the closed form") {
  const AmericanPutSpec spec = atm_spec(2000);
  const double tree = crr_european_put(spec);
  const double closed = black_scholes_put(spec.spot, spec.strike, spec.rate,
                                          spec.sigma, spec.horizon);
  CHECK(std::fabs(tree - closed) <= 0.05);
}

TEST_CASE("american tree is stable under refinement") {
  const double coarse = crr_american_put(atm_spec(500));
  const double fine = crr_american_put(atm_spec(1000));
  CHECK(std::fabs(coarse - fine) <= 0.01);
}

TEST_CASE("degenerate specs are rejected") {
  AmericanPutSpec spec = atm_spec(10);
  spec.spot = 0.0;
  CHECK_THROWS_AS(crr_american_put(spec), std::invalid_argument);
  spec = atm_spec(10);
  spec.strike = -1.0;
  CHECK_THROWS_AS(crr_american_put(spec), std::invalid_argument);
  spec = atm_spec(10);
  spec.rate = 0.0;
  CHECK_THROWS_AS(crr_american_put(spec), std::invalid_argument);
  spec = atm_spec(10);
  spec.sigma = 0.0;
  CHECK_THROWS_AS(crr_european_put(spec), std::invalid_argument);
  spec = atm_spec(10);
  spec.horizon = 0.0;
  CHECK_THROWS_AS(crr_american_put(spec), std::invalid_argument);
  spec = atm_spec(0);
  CHECK_THROWS_AS(crr_american_put(spec), std::invalid_argument);
  CHECK_THROWS_AS(rbsde_american_put_problem(spec), std::invalid_argument);

  // A rate step large enough to push the risk-neutral weight past 1.
  spec = atm_spec(1);
  spec.rate = 1.0;
  spec.sigma = 0.05;
  spec.horizon = 1.0;
  CHECK_THROWS_AS(crr_american_put(spec), std::invalid_argument);
}

TEST_CASE("the reflected formulation carries the put data") {
  AmericanPutSpec spec;
  spec.spot = 90.0;
  spec.strike = 100.0;
  spec.rate = 0.06;
  spec.sigma = 0.2;
  spec.horizon = 0.5;
  spec.steps = 10;
  const ProblemSpec p = rbsde_american_put_problem(spec);

  CHECK(p.grid.steps == 10);
  CHECK(p.grid.horizon == 0.5);
  CHECK(p.obstacle(0.0, 0.0) == 10.0);  // (K - S0)^+ at the root
  for (double w : {-0.8, -0.1, 0.0, 0.35, 1.2}) {
    CHECK(p.terminal(w) == p.obstacle(spec.horizon, w));
  }
  CHECK(p.driver.mu(0.3, 0.1) == 0.06);
  CHECK(p.driver.gamma(0.3, 0.1) == 0.0);
  CHECK(p.driver.epsilon == 0.06);
  CHECK(p.driver.deterministic_coefficients());
  CHECK(p.driver.f(0.1, 0.2, 2.0, 5.0) == -0.12);  // -r y, z ignored
  CHECK(p.beta == doctest::Approx(13.745966692414834).epsilon(1e-15));
}

TEST_CASE("tree values match the frozen reference file") {
  std::ifstream in(testutil::fixture_path("oracle_values.json"));
  REQUIRE(in.good());
  const nlohmann::json doc = nlohmann::json::parse(in);

  auto spec_of = [](const nlohmann::json& row) {
    AmericanPutSpec spec;
    spec.spot = row.at("spot").get<double>();
    spec.strike = row.at("strike").get<double>();
    spec.rate = row.at("rate").get<double>();
    spec.sigma = row.at("sigma").get<double>();
    spec.horizon = row.at("horizon").get<double>();
    spec.steps = row.at("steps").get<int>();
    return spec;
  };

  REQUIRE(!doc.at("american_put").empty());
  for (const auto& row : doc.at("american_put")) {
    const double want = row.at("value").get<double>();
    CHECK(crr_american_put(spec_of(row)) ==
          doctest::Approx(want).epsilon(1e-12));
  }
  REQUIRE(!doc.at("european_put").empty());
  for (const auto& row : doc.at("european_put")) {
    const double want = row.at("value").get<double>();
    CHECK(crr_european_put(spec_of(row)) ==
          doctest::Approx(want).epsilon(1e-12));
  }
}
