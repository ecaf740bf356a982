#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mitt {

/// Treatment arm. Serialized as 0 (control) / 1 (intervention) everywhere.
enum class Arm : int { Control = 0, Intervention = 1 };

/// The four principal strata induced by the binary intercurrent event
/// "failure to initiate treatment". Membership is a baseline property:
/// it depends only on the pair of potential initiation indicators, never
/// on the realized assignment.
enum class PrincipalStratum : int {
  AlwaysInitiator = 0,        // initiates under either arm
  InterventionInitiator = 1,  // initiates only if assigned the intervention
  ControlInitiator = 2,       // initiates only if assigned the control
  NeverInitiator = 3,         // initiates under neither arm
};

inline constexpr int kNumStrata = 4;
inline constexpr PrincipalStratum kAllStrata[kNumStrata] = {
    PrincipalStratum::AlwaysInitiator,
    PrincipalStratum::InterventionInitiator,
    PrincipalStratum::ControlInitiator,
    PrincipalStratum::NeverInitiator,
};

const char* to_string(Arm arm);
const char* to_string(PrincipalStratum stratum);

/// Maps a pair of potential initiation indicators to its stratum.
/// Total on {0,1}^2; inverse of initiates_under() below.
PrincipalStratum classify_stratum(bool initiates_under_intervention,
                                  bool initiates_under_control);

/// Whether members of `stratum` initiate treatment when assigned `arm`.
bool initiates_under(PrincipalStratum stratum, Arm arm);

/// Full counterfactual record: both potential outcomes and both potential
/// initiation indicators. Only simulation code ever sees these; analysis
/// code works on ObservedRecord.
struct PotentialParticipant {
  std::string id;
  double outcome_intervention = 0.0;  // potential outcome if assigned the intervention
  double outcome_control = 0.0;       // potential outcome if assigned the control
  bool initiates_intervention = false;
  bool initiates_control = false;

  double outcome_under(Arm arm) const {
    return arm == Arm::Intervention ? outcome_intervention : outcome_control;
  }
  bool initiation_under(Arm arm) const {
    return arm == Arm::Intervention ? initiates_intervention : initiates_control;
  }
  PrincipalStratum stratum() const {
    return classify_stratum(initiates_intervention, initiates_control);
  }
};

/// Post-randomization view of one participant: assigned arm, realized
/// initiation status, realized outcome. Carries nothing from the
/// counterfactual arm.
struct ObservedRecord {
  std::string id;
  Arm arm = Arm::Control;
  bool initiated = false;
  double outcome = 0.0;
};

/// Consistency projection: the observed record under assignment `arm`
/// exposes exactly that arm's potential initiation and outcome.
ObservedRecord observe(const PotentialParticipant& participant, Arm arm);

struct TrialMetadata {
  std::string name;
  std::string intercurrent_event;
};

struct TrialDataset {
  std::vector<ObservedRecord> records;
  TrialMetadata metadata;
};

}  // namespace mitt
