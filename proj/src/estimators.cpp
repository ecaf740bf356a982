#include "mitt/estimators.hpp"

#include <cmath>

#include "mitt/errors.hpp"
#include "mitt/stats.hpp"

namespace mitt {

namespace {

enum class AnalysisPopulation { InitiatedOnly, All };

// Shared accumulation for both estimators. When the two analysis
// populations coincide (every record initiated) the record streams are
// identical, so mITT and ITT agree bit for bit.
EstimateResult difference_in_means(const TrialDataset& data, AnalysisPopulation pop,
                                   double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ConfigError("confidence level must lie in (0,1)");
  }

  RunningMoments by_arm[2];
  for (const ObservedRecord& record : data.records) {
    if (pop == AnalysisPopulation::InitiatedOnly && !record.initiated) continue;
    by_arm[static_cast<int>(record.arm)].add(record.outcome);
  }
  const RunningMoments& intervention = by_arm[static_cast<int>(Arm::Intervention)];
  const RunningMoments& control = by_arm[static_cast<int>(Arm::Control)];

  for (Arm arm : {Arm::Intervention, Arm::Control}) {
    if (by_arm[static_cast<int>(arm)].n == 0) {
      if (pop == AnalysisPopulation::InitiatedOnly) throw NoInitiatorsError(to_string(arm));
      throw EmptyArmError(to_string(arm));
    }
  }

  EstimateResult result;
  result.estimate = intervention.mean - control.mean;
  result.level = level;
  result.n_analyzed_intervention = intervention.n;
  result.n_analyzed_control = control.n;

  if (intervention.n >= 2 && control.n >= 2) {
    const double se = std::sqrt(intervention.variance() / static_cast<double>(intervention.n) +
                                control.variance() / static_cast<double>(control.n));
    const double z = normal_quantile(0.5 + level / 2.0);
    result.se = se;
    result.ci_low = result.estimate - z * se;
    result.ci_high = result.estimate + z * se;
  }
  return result;
}

}  // namespace

EstimateResult mitt_estimate(const TrialDataset& data, double level) {
  return difference_in_means(data, AnalysisPopulation::InitiatedOnly, level);
}

EstimateResult itt_estimate(const TrialDataset& data, double level) {
  return difference_in_means(data, AnalysisPopulation::All, level);
}

double oracle_ps_estimand(const DgpConfig& config) {
  config.validate();
  if (config.proportions.always <= 0.0) {
    throw UndefinedEstimandError(
        "the always-initiators stratum has zero mass; the principal-stratum "
        "estimand conditions on it");
  }
  const auto& outcomes = config.outcomes;
  return outcomes.mean(PrincipalStratum::AlwaysInitiator, Arm::Intervention) -
         outcomes.mean(PrincipalStratum::AlwaysInitiator, Arm::Control);
}

double analytic_mitt_limit(const DgpConfig& config) {
  config.validate();
  const StratumProportions& pi = config.proportions;
  const OutcomeSpec& mu = config.outcomes;

  const double mass_intervention = pi.always + pi.intervention;
  const double mass_control = pi.always + pi.control;
  if (mass_intervention <= 0.0) throw UndefinedLimitError(to_string(Arm::Intervention));
  if (mass_control <= 0.0) throw UndefinedLimitError(to_string(Arm::Control));

  const double limit_intervention =
      (pi.always * mu.mean(PrincipalStratum::AlwaysInitiator, Arm::Intervention) +
       pi.intervention * mu.mean(PrincipalStratum::InterventionInitiator, Arm::Intervention)) /
      mass_intervention;
  const double limit_control =
      (pi.always * mu.mean(PrincipalStratum::AlwaysInitiator, Arm::Control) +
       pi.control * mu.mean(PrincipalStratum::ControlInitiator, Arm::Control)) /
      mass_control;
  return limit_intervention - limit_control;
}

double analytic_bias(const DgpConfig& config) {
  return analytic_mitt_limit(config) - oracle_ps_estimand(config);
}

}  // namespace mitt
