#include <doctest.h>

#include <string>
#include <vector>

#include "mitt/diagnostics.hpp"
#include "mitt/dgp.hpp"
#include "mitt/errors.hpp"

using namespace mitt;

namespace {

// counts are (noninitiators, arm size).
TrialDataset two_arm_counts(std::int64_t noninit_intervention, std::int64_t n_intervention,
                            std::int64_t noninit_control, std::int64_t n_control) {
  TrialDataset data;
  int k = 0;
  for (std::int64_t i = 0; i < n_intervention; ++i) {
    data.records.push_back(ObservedRecord{.id = "i" + std::to_string(++k),
                                          .arm = Arm::Intervention,
                                          .initiated = i >= noninit_intervention,
                                          .outcome = 0.0});
  }
  for (std::int64_t i = 0; i < n_control; ++i) {
    data.records.push_back(ObservedRecord{.id = "c" + std::to_string(++k),
                                          .arm = Arm::Control,
                                          .initiated = i >= noninit_control,
                                          .outcome = 0.0});
  }
  return data;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("equal non-initiation shares show no signal") {
  const BalanceReport report = initiation_balance(two_arm_counts(10, 100, 10, 100));
  CHECK(report.n_intervention == 100);
  CHECK(report.n_control == 100);
  CHECK(report.noninit_intervention == 10);
  CHECK(report.noninit_control == 10);
  CHECK(report.prop_diff == 0.0);
  CHECK(report.z_stat == 0.0);
  CHECK(report.p_value == 1.0);
  CHECK_FALSE(report.flagged);
}

TEST_CASE("0/100 vs 30/100 non-initiators: the frozen z and p") {
  const BalanceReport report = initiation_balance(two_arm_counts(0, 100, 30, 100));
  CHECK(report.prop_diff == doctest::Approx(-0.3).epsilon(1e-14));
  CHECK(report.z_stat == doctest::Approx(-5.940885257860046).epsilon(1e-12));
  CHECK(report.p_value == doctest::Approx(2.834869930488161e-9).epsilon(1e-9));
  CHECK(report.p_value < 0.001);
  CHECK(report.flagged);
}

TEST_CASE("degenerate pooled proportions report no evidence by convention") {
  const BalanceReport none = initiation_balance(two_arm_counts(0, 50, 0, 50));
  CHECK(none.z_stat == 0.0);
  CHECK(none.p_value == 1.0);
  CHECK_FALSE(none.flagged);

  const BalanceReport all = initiation_balance(two_arm_counts(50, 50, 50, 50));
  CHECK(all.z_stat == 0.0);
  CHECK(all.p_value == 1.0);
  CHECK_FALSE(all.flagged);
}

TEST_CASE("swapping the arms negates z and keeps p") {
  const BalanceReport a = initiation_balance(two_arm_counts(5, 80, 20, 120));
  const BalanceReport b = initiation_balance(two_arm_counts(20, 120, 5, 80));
  CHECK(a.z_stat == doctest::Approx(-b.z_stat).epsilon(1e-14));
  CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-14));
  CHECK(a.flagged == b.flagged);
}

TEST_CASE("alpha governs flagging") {
  // p here is about 0.00036.
  const TrialDataset data = two_arm_counts(0, 100, 12, 100);
  CHECK(initiation_balance(data, 0.05).flagged);
  CHECK_FALSE(initiation_balance(data, 0.0001).flagged);
}

TEST_CASE("balance input validation") {
  CHECK_THROWS_AS(initiation_balance(two_arm_counts(0, 10, 0, 10), 0.0), ConfigError);
  CHECK_THROWS_AS(initiation_balance(two_arm_counts(0, 10, 0, 10), 1.0), ConfigError);

  TrialDataset one_arm;
  one_arm.records.push_back(
      ObservedRecord{.id = "a", .arm = Arm::Intervention, .initiated = true, .outcome = 1.0});
  CHECK_THROWS_AS(initiation_balance(one_arm), EmptyArmError);
}

TEST_CASE("appropriateness verdicts and precedence") {
  const Verdict ok = mitt_appropriateness(
      {.event_identifiable_both_arms = true, .allocation_independent_of_event = true});
  CHECK(ok.appropriate);
  CHECK(ok.reason.empty());

  const Verdict unidentifiable = mitt_appropriateness(
      {.event_identifiable_both_arms = false, .allocation_independent_of_event = true});
  CHECK_FALSE(unidentifiable.appropriate);
  CHECK(unidentifiable.reason.find("identified") != std::string::npos);

  const Verdict dependent = mitt_appropriateness(
      {.event_identifiable_both_arms = true, .allocation_independent_of_event = false});
  CHECK_FALSE(dependent.appropriate);
  CHECK(dependent.reason.find("allocated") != std::string::npos);

  // Identifiability failure wins when both criteria fail.
  const Verdict both = mitt_appropriateness(
      {.event_identifiable_both_arms = false, .allocation_independent_of_event = false});
  CHECK(both.reason == unidentifiable.reason);
}

TEST_CASE("strata table from a configuration shows shares and analysis cells") {
  DgpConfig config;
  config.n = 100;
  config.proportions = {.always = 0.7, .intervention = 0.0, .control = 0.0, .never = 0.3};
  config.outcomes = OutcomeSpec::filled_with(NormalOutcome{0.0, 1.0});
  const std::string table = strata_table(config);
  CHECK(table.find("always initiators") != std::string::npos);
  CHECK(table.find("never initiators") != std::string::npos);
  CHECK(table.find("yes *") != std::string::npos);
  CHECK(table.find("0.7000") != std::string::npos);
  CHECK(table.find("[empty stratum]") != std::string::npos);  // the two zero-mass strata
  CHECK(table.find("* cell enters the mITT analysis population") != std::string::npos);
}

TEST_CASE("strata table from a population shows counts") {
  std::vector<PotentialParticipant> population;
  for (int i = 0; i < 3; ++i) {
    population.push_back(PotentialParticipant{.id = "a" + std::to_string(i),
                                              .outcome_intervention = 0.0,
                                              .outcome_control = 0.0,
                                              .initiates_intervention = true,
                                              .initiates_control = true});
  }
  population.push_back(PotentialParticipant{.id = "x",
                                            .outcome_intervention = 0.0,
                                            .outcome_control = 0.0,
                                            .initiates_intervention = true,
                                            .initiates_control = false});
  const std::string table = strata_table(population);
  CHECK(table.find("3 (0.7500)") != std::string::npos);
  CHECK(table.find("1 (0.2500)") != std::string::npos);
  CHECK(table.find("0 (0.0000)") != std::string::npos);
}

TEST_CASE("observed data cannot reveal strata") {
  TrialDataset data;
  data.records.push_back(
      ObservedRecord{.id = "a", .arm = Arm::Control, .initiated = true, .outcome = 1.0});
  CHECK_THROWS_AS(strata_table(StrataTableSource{data}), CounterfactualUnavailableError);
}

TEST_CASE("an empty population cannot be tabulated") {
  CHECK_THROWS_AS(strata_table(std::vector<PotentialParticipant>{}), ConfigError);
}

}  // TEST_SUITE
