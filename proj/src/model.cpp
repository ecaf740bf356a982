#include "mitt/model.hpp"

namespace mitt {

const char* to_string(Arm arm) {
  return arm == Arm::Intervention ? "intervention" : "control";
}

const char* to_string(PrincipalStratum stratum) {
  switch (stratum) {
    case PrincipalStratum::AlwaysInitiator:
      return "always initiators";
    case PrincipalStratum::InterventionInitiator:
      return "intervention initiators";
    case PrincipalStratum::ControlInitiator:
      return "control initiators";
    case PrincipalStratum::NeverInitiator:
      return "never initiators";
  }
  return "?";
}

PrincipalStratum classify_stratum(bool initiates_under_intervention,
                                  bool initiates_under_control) {
  if (initiates_under_intervention) {
    return initiates_under_control ? PrincipalStratum::AlwaysInitiator
                                   : PrincipalStratum::InterventionInitiator;
  }
  return initiates_under_control ? PrincipalStratum::ControlInitiator
                                 : PrincipalStratum::NeverInitiator;
}

bool initiates_under(PrincipalStratum stratum, Arm arm) {
  switch (stratum) {
    case PrincipalStratum::AlwaysInitiator:
      return true;
    case PrincipalStratum::InterventionInitiator:
      return arm == Arm::Intervention;
    case PrincipalStratum::ControlInitiator:
      return arm == Arm::Control;
    case PrincipalStratum::NeverInitiator:
      return false;
  }
  return false;
}

ObservedRecord observe(const PotentialParticipant& participant, Arm arm) {
  return ObservedRecord{
      .id = participant.id,
      .arm = arm,
      .initiated = participant.initiation_under(arm),
      .outcome = participant.outcome_under(arm),
  };
}

}  // namespace mitt
