#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mitt/dgp.hpp"
#include "mitt/model.hpp"

namespace mitt {

/// Two-proportion z-test (pooled variance, no continuity correction) on the
/// share of non-initiators per arm. This is a partial check only: imbalance
/// is evidence against the identifying assumption, balance is never
/// confirmation of it.
struct BalanceReport {
  std::int64_t n_intervention = 0;
  std::int64_t n_control = 0;
  std::int64_t noninit_intervention = 0;
  std::int64_t noninit_control = 0;
  double prop_diff = 0.0;  // non-initiation share, intervention minus control
  double z_stat = 0.0;
  double p_value = 1.0;
  double alpha = 0.05;
  bool flagged = false;  // p_value < alpha
};

/// Throws EmptyArmError when an arm has no records. Degenerate pooled
/// proportions (0 or 1) report z = 0, p = 1 by convention.
BalanceReport initiation_balance(const TrialDataset& data, double alpha = 0.05);

/// The two questions that decide whether the mITT estimator targets the
/// principal-stratum effect: can the event be observed in both arms, and is
/// its occurrence unaffected by the allocation.
struct AppropriatenessInput {
  bool event_identifiable_both_arms = false;
  bool allocation_independent_of_event = false;
  std::string justification;  // trial-specific rationale, free text
};

struct Verdict {
  bool appropriate = false;
  std::string reason;  // empty iff appropriate; cites the failed criterion

  bool operator==(const Verdict&) const = default;
};

/// Appropriate iff both criteria hold. A failed identifiability criterion
/// takes precedence in the reason.
Verdict mitt_appropriateness(const AppropriatenessInput& input);

/// Inputs that carry counterfactual stratum information: either a DGP
/// configuration (expected shares) or a generated counterfactual
/// population (realized counts). An observed TrialDataset does not;
/// passing one raises CounterfactualUnavailableError, since a single
/// observed arm cannot reveal stratum membership.
using StrataTableSource =
    std::variant<DgpConfig, std::vector<PotentialParticipant>, TrialDataset>;

/// Renders the 4x2 stratum-by-arm initiation table: which cells each arm's
/// mITT analysis population draws from (marked *), and which strata are
/// empty under the source.
std::string strata_table(const StrataTableSource& source);

}  // namespace mitt
