#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mitt/dgp.hpp"
#include "mitt/errors.hpp"
#include "mitt/estimators.hpp"
#include "mitt/verification.hpp"

using namespace mitt;

namespace {

PotentialParticipant make(std::string id, bool init_intervention, bool init_control, double y1,
                          double y0) {
  return PotentialParticipant{.id = std::move(id),
                              .outcome_intervention = y1,
                              .outcome_control = y0,
                              .initiates_intervention = init_intervention,
                              .initiates_control = init_control};
}

DgpConfig violated_config() {
  DgpConfig config;
  config.n = 2000;
  config.proportions = {.always = 0.6, .intervention = 0.2, .control = 0.1, .never = 0.1};
  config.outcomes = OutcomeSpec::filled_with(NormalOutcome{0.0, 1.0});
  config.outcomes.cell(PrincipalStratum::AlwaysInitiator, Arm::Intervention) =
      NormalOutcome{2.0, 1.0};
  config.outcomes.cell(PrincipalStratum::AlwaysInitiator, Arm::Control) = NormalOutcome{1.0, 1.0};
  config.outcomes.cell(PrincipalStratum::InterventionInitiator, Arm::Intervention) =
      NormalOutcome{5.0, 1.0};
  config.outcomes.cell(PrincipalStratum::ControlInitiator, Arm::Control) = NormalOutcome{0.0, 1.0};
  config.seed = 42;
  return config;
}

DgpConfig small_mc_config() {
  DgpConfig config;
  config.n = 50;
  config.proportions = {.always = 0.8, .intervention = 0.0, .control = 0.0, .never = 0.2};
  config.outcomes = OutcomeSpec::filled_with(NormalOutcome{0.0, 1.0});
  config.outcomes.cell(PrincipalStratum::AlwaysInitiator, Arm::Intervention) =
      NormalOutcome{1.0, 1.0};
  config.seed = 9;
  return config;
}

}  // namespace

TEST_SUITE("verification") {

TEST_CASE("constant unit effect: every balanced assignment estimates exactly 1") {
  std::vector<PotentialParticipant> population = {
      make("a", true, true, 1.0, 0.0), make("b", true, true, 3.0, 2.0),
      make("c", true, true, -4.0, -5.0), make("d", true, true, 0.5, -0.5)};
  const ExhaustiveResult result = exhaustive_expectation(population);
  CHECK(result.mean_estimate == 1.0);
  CHECK(result.defined_assignments == 6);  // C(4,2)
  CHECK(result.undefined_assignments == 0);
}

TEST_CASE("always/never population: enumeration equals the stratum mean difference") {
  std::vector<PotentialParticipant> population = {
      make("a1", true, true, 3.0, 1.0),    make("a2", true, true, 5.0, 2.0),
      make("a3", true, true, 2.0, 2.0),    make("a4", true, true, 6.0, 3.0),
      make("n1", false, false, 100.0, -50.0), make("n2", false, false, -7.0, 9.0)};
  const ExhaustiveResult result = exhaustive_expectation(population);
  CHECK(result.mean_estimate == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(result.defined_assignments == 20);  // C(6,3)
  CHECK(result.undefined_assignments == 0);
  CHECK(always_stratum_mean_difference(population) == 2.0);
}

TEST_CASE("an intervention-initiator biases the enumeration away from the estimand") {
  std::vector<PotentialParticipant> population = {
      make("a1", true, true, 1.0, 0.0), make("a2", true, true, 2.0, 1.0),
      make("a3", true, true, 3.0, 2.0), make("x", true, false, 100.0, 55.0)};
  const ExhaustiveResult result = exhaustive_expectation(population);
  CHECK(result.mean_estimate == doctest::Approx(25.5).epsilon(1e-13));
  CHECK(result.defined_assignments == 6);
  CHECK(result.undefined_assignments == 0);
  // The estimand it fails to hit:
  CHECK(always_stratum_mean_difference(population) == 1.0);
}

TEST_CASE("undefined assignments are counted and excluded") {
  std::vector<PotentialParticipant> population = {
      make("a1", true, true, 4.0, 1.0), make("a2", true, true, 8.0, 3.0),
      make("n1", false, false, 0.0, 0.0), make("n2", false, false, 0.0, 0.0)};
  const ExhaustiveResult result = exhaustive_expectation(population);
  // Both never-initiators in one arm leaves that arm without initiators.
  CHECK(result.defined_assignments == 4);
  CHECK(result.undefined_assignments == 2);
  CHECK(result.mean_estimate == doctest::Approx(4.0).epsilon(1e-13));  // (6 - 2)
}

TEST_CASE("fully undefined populations raise AllUndefinedError") {
  std::vector<PotentialParticipant> population = {make("a", true, true, 1.0, 0.0),
                                                  make("n", false, false, 0.0, 0.0)};
  CHECK_THROWS_AS(exhaustive_expectation(population), AllUndefinedError);
}

TEST_CASE("enumeration size limits") {
  std::vector<PotentialParticipant> odd(3, make("a", true, true, 1.0, 0.0));
  CHECK_THROWS_AS(exhaustive_expectation(odd), ConfigError);
  std::vector<PotentialParticipant> huge(18, make("a", true, true, 1.0, 0.0));
  CHECK_THROWS_AS(exhaustive_expectation(huge), ConfigError);
}

TEST_CASE("enumeration is invariant to participant order") {
  std::vector<PotentialParticipant> population = {
      make("a1", true, true, 3.0, 1.0), make("a2", true, true, 5.0, 2.0),
      make("a3", true, true, 2.0, 2.0), make("a4", true, true, 6.0, 3.0),
      make("n1", false, false, 1.0, 1.0), make("n2", false, false, 2.0, 2.0)};
  const ExhaustiveResult forward = exhaustive_expectation(population);
  std::reverse(population.begin(), population.end());
  const ExhaustiveResult backward = exhaustive_expectation(population);
  CHECK(forward.mean_estimate == doctest::Approx(backward.mean_estimate).epsilon(1e-13));
  CHECK(forward.defined_assignments == backward.defined_assignments);
  CHECK(forward.undefined_assignments == backward.undefined_assignments);
}

TEST_CASE("the shipped proof fixtures all pass at 1e-12") {
  const auto rows = run_proof_checks();
  REQUIRE(rows.size() == 12);
  for (const ProofCheckRow& row : rows) {
    CAPTURE(row.name);
    CHECK(row.pass);
    CHECK(row.undefined_assignments == 0);
  }
  // Spot-check the hand-frozen values of the first four fixtures.
  CHECK(rows[0].always_stratum_mean_diff == 1.0);
  CHECK(rows[1].always_stratum_mean_diff == 2.0);
  CHECK(rows[2].always_stratum_mean_diff == -1.25);
  CHECK(rows[3].always_stratum_mean_diff == 0.0);
}

TEST_CASE("always_stratum_mean_difference needs the stratum") {
  std::vector<PotentialParticipant> population = {make("n", false, false, 1.0, 0.0)};
  CHECK_THROWS_AS(always_stratum_mean_difference(population), UndefinedEstimandError);
}

TEST_CASE("run_mc is deterministic and thread-count invariant") {
  const DgpConfig config = small_mc_config();
  const McSummary one = run_mc(config, 200, 0.95, 1);
  const McSummary again = run_mc(config, 200, 0.95, 1);
  const McSummary pooled = run_mc(config, 200, 0.95, 3);

  CHECK(one.mean_estimate == again.mean_estimate);
  CHECK(one.empirical_sd == again.empirical_sd);
  CHECK(one.ci_coverage == again.ci_coverage);

  CHECK(one.mean_estimate == pooled.mean_estimate);
  CHECK(one.empirical_sd == pooled.empirical_sd);
  CHECK(one.mc_se == pooled.mc_se);
  CHECK(one.bias == pooled.bias);
  CHECK(one.ci_coverage == pooled.ci_coverage);
  CHECK(one.n_failed == pooled.n_failed);
}

TEST_CASE("run_mc carries the oracle and analytic limit") {
  const McSummary summary = run_mc(small_mc_config(), 200, 0.95, 1);
  CHECK(summary.oracle == 1.0);
  CHECK(summary.analytic_limit == 1.0);
  CHECK(summary.replications == 200);
  CHECK(summary.bias == summary.mean_estimate - 1.0);
}

TEST_CASE("degenerate outcomes: zero variance, exact coverage") {
  DgpConfig config = small_mc_config();
  config.outcomes = OutcomeSpec::filled_with(NormalOutcome{0.0, 0.0});
  config.outcomes.cell(PrincipalStratum::AlwaysInitiator, Arm::Intervention) =
      NormalOutcome{1.0, 0.0};
  const McSummary summary = run_mc(config, 100, 0.95, 1);
  CHECK(summary.mean_estimate == 1.0);
  CHECK(summary.empirical_sd == 0.0);
  CHECK(summary.mc_se == 0.0);
  CHECK(summary.bias == 0.0);
  CHECK(summary.ci_coverage == 1.0);  // [1,1] contains the oracle
  CHECK(summary.n_failed == 0);
}

TEST_CASE("failed replications are counted, not averaged") {
  DgpConfig config = small_mc_config();
  config.n = 6;
  config.proportions = {.always = 0.3, .intervention = 0.0, .control = 0.0, .never = 0.7};
  const McSummary summary = run_mc(config, 400, 0.95, 1);
  CHECK(summary.n_failed > 0);
  CHECK(summary.n_failed < 400);
  CHECK(std::isfinite(summary.mean_estimate));
  CHECK(std::isfinite(summary.mc_se));
}

TEST_CASE("run_mc input validation") {
  CHECK_THROWS_AS(run_mc(small_mc_config(), 1, 0.95, 1), ConfigError);
  CHECK_THROWS_AS(run_mc(small_mc_config(), 100, 1.5, 1), ConfigError);
}

TEST_CASE("sweep reproduces the closed-form bias at each grid point") {
  DgpConfig base = violated_config();
  base.n = 300;
  const std::vector<double> grid = {0.0, 0.1, 0.2};
  const auto rows = assumption_violation_sweep(base, grid, 200, 0.95, 1);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].pi_violation == 0.0);
  CHECK(rows[0].analytic_bias == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(rows[1].analytic_bias == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(rows[2].analytic_bias == doctest::Approx(1.1428571428571428).epsilon(1e-13));
  // Strictly increasing in the violation share for this outcome grid.
  CHECK(rows[0].analytic_bias < rows[1].analytic_bias);
  CHECK(rows[1].analytic_bias < rows[2].analytic_bias);
  // The simulated bias agrees with the closed form within Monte Carlo noise.
  for (const SweepRow& row : rows) {
    CHECK(std::abs(row.mc_bias - row.analytic_bias) <= 5.0 * row.mc_se);
  }
}

TEST_CASE("sweep grid validation") {
  const DgpConfig base = violated_config();
  CHECK_THROWS_AS(assumption_violation_sweep(base, {-0.1}, 10, 0.95, 1), ConfigError);
  CHECK_THROWS_AS(assumption_violation_sweep(base, {0.5}, 10, 0.95, 1), ConfigError);
  // never = 0.1 leaves no always-initiators at violation share 0.45.
  CHECK_THROWS_AS(assumption_violation_sweep(base, {0.45}, 10, 0.95, 1), ConfigError);
}

}  // TEST_SUITE
