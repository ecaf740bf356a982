#pragma once

#include <cstdint>
#include <optional>

#include "mitt/dgp.hpp"
#include "mitt/model.hpp"

namespace mitt {

/// A difference-in-means estimate with Welch (unpooled) standard error and
/// a normal-approximation confidence interval. When an analyzed arm holds a
/// single record the point estimate is still returned but se / ci_low /
/// ci_high are disengaged (inference undefined, estimate not).
struct EstimateResult {
  double estimate = 0.0;
  std::optional<double> se;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  double level = 0.95;
  std::int64_t n_analyzed_intervention = 0;
  std::int64_t n_analyzed_control = 0;

  bool inference_defined() const { return se.has_value(); }
  bool operator==(const EstimateResult&) const = default;
};

/// Modified intention-to-treat: difference in mean outcomes between the
/// initiated subsets of the two arms. Participants with initiated == 0 are
/// excluded from the analysis population entirely; their outcome values
/// cannot influence the result.
/// Throws NoInitiatorsError naming the arm when an arm has no initiators.
EstimateResult mitt_estimate(const TrialDataset& data, double level = 0.95);

/// Intention-to-treat / treatment-policy comparator: difference in mean
/// outcomes over all records regardless of initiation.
/// Throws EmptyArmError when an arm has no records.
EstimateResult itt_estimate(const TrialDataset& data, double level = 0.95);

/// The principal-stratum estimand under `config`: the always-initiator
/// stratum's mean difference, read directly from the outcome grid.
/// Throws UndefinedEstimandError when that stratum has zero mass.
double oracle_ps_estimand(const DgpConfig& config);

/// Large-sample limit of the mITT estimator: the intervention analysis
/// population mixes always- and intervention-initiators, the control side
/// always- and control-initiators, each weighted by stratum mass.
/// Throws UndefinedLimitError when an analysis population has zero mass.
double analytic_mitt_limit(const DgpConfig& config);

/// analytic_mitt_limit minus oracle_ps_estimand: zero exactly when the two
/// assumption-violating strata are absent or share the always-initiators'
/// relevant means.
double analytic_bias(const DgpConfig& config);

}  // namespace mitt
