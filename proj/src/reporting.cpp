#include "mitt/reporting.hpp"

#include <cstdio>
#include <sstream>

#include "mitt/errors.hpp"
#include "mitt/io.hpp"

namespace mitt {

std::string format_sig6(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

namespace {

std::string default_estimand_statement(const std::string& event) {
  return "A principal stratum strategy is used for the intercurrent event \"" + event +
         "\": the target of estimation is the difference in mean outcomes among the "
         "participants who would initiate treatment under either assigned arm.";
}

const char* kEstimatorStatement =
    "Participants who experience the intercurrent event are excluded from the analysis "
    "population; the effect is estimated as the difference in mean outcomes between the "
    "initiated participants of the two arms.";

const char* kAssumptionStatement =
    "Unbiasedness for the principal stratum effect requires that there are no "
    "\"intervention initiators\" and no \"control initiators\": whether a participant "
    "initiates treatment must not depend on the assigned arm. The per-arm proportions of "
    "non-initiators can partly assess this assumption (a large discrepancy is evidence "
    "against it), but their balance never confirms it.";

}  // namespace

std::string emit_box1(const ReportInputs& inputs) {
  if (inputs.verdict && inputs.verdict->appropriate && inputs.assumption_justification.empty()) {
    throw MissingJustificationError(
        "an Appropriate verdict requires a trial-specific justification of the "
        "identifying assumptions");
  }

  std::ostringstream out;
  out << "Reporting block (mITT principal stratum analysis)\n";
  if (!inputs.trial_name.empty()) out << "Trial: " << inputs.trial_name << "\n";
  const std::string event = inputs.intercurrent_event.empty()
                                ? std::string("failure to initiate treatment")
                                : inputs.intercurrent_event;
  out << "Intercurrent event: " << event << "\n";
  out << "\n1. Estimand\n   "
      << (inputs.estimand_statement.empty() ? default_estimand_statement(event)
                                            : inputs.estimand_statement)
      << "\n";
  out << "\n2. Estimator\n   " << kEstimatorStatement << "\n";
  out << "\n3. Assumptions required for unbiasedness\n   " << kAssumptionStatement << "\n";

  if (!inputs.verdict) {
    out << "\n4. Appropriateness not assessed\n   "
        << "No appropriateness inputs were supplied for this trial. Assess whether the "
        << "event is identifiable in both arms and unaffected by allocation, and provide "
        << "a justification, before reporting the mITT result as a principal stratum "
        << "effect.\n";
    if (!inputs.assumption_justification.empty()) {
      out << "   Supplied notes: " << inputs.assumption_justification << "\n";
    }
  } else if (!inputs.verdict->appropriate) {
    out << "\n4. WARNING: the mITT estimator is not appropriate for this trial\n   "
        << inputs.verdict->reason << ".\n   "
        << "The mITT difference reported for this trial should not be interpreted as the "
        << "principal stratum effect.\n";
  } else {
    out << "\n4. Justification of the assumptions in this trial\n   "
        << inputs.assumption_justification << "\n";
  }
  return out.str();
}

namespace {

std::string estimate_line(const char* label, const EstimateResult& est) {
  std::ostringstream row;
  row << "  " << label << "  estimate " << format_sig6(est.estimate);
  if (est.inference_defined()) {
    row << "  se " << format_sig6(*est.se) << "  " << format_sig6(est.level * 100.0)
        << "% CI [" << format_sig6(*est.ci_low) << ", " << format_sig6(*est.ci_high) << "]";
  } else {
    row << "  se undefined (an analyzed arm has a single record)";
  }
  row << "  n analyzed " << est.n_analyzed_intervention << "/" << est.n_analyzed_control
      << " (intervention/control)\n";
  return row.str();
}

}  // namespace

AnalysisReport emit_analysis_report(const ReportInputs& inputs) {
  if (!inputs.itt && !inputs.mitt && !inputs.balance) {
    throw ConfigError("an analysis report needs estimates or a balance diagnostic");
  }
  const std::string box1 = emit_box1(inputs);

  std::ostringstream out;
  out << "=== Analysis report: "
      << (inputs.trial_name.empty() ? std::string("(unnamed trial)") : inputs.trial_name)
      << " ===\n";
  const std::string event = inputs.intercurrent_event.empty()
                                ? std::string("failure to initiate treatment")
                                : inputs.intercurrent_event;
  out << "Intercurrent event: " << event << "\n";

  if (inputs.itt || inputs.mitt) {
    out << "\nEstimates (difference in means)\n";
    if (inputs.itt) out << estimate_line("ITT ", *inputs.itt);
    if (inputs.mitt) out << estimate_line("mITT", *inputs.mitt);
    out << "  mITT analyzes initiated participants only; ITT analyzes everyone "
           "randomized.\n";
  }

  if (inputs.balance) {
    const BalanceReport& b = *inputs.balance;
    out << "\nInitiation balance (partial check only)\n";
    out << "  non-initiators: " << b.noninit_intervention << "/" << b.n_intervention
        << " (intervention) vs " << b.noninit_control << "/" << b.n_control
        << " (control)\n";
    out << "  difference in proportions " << format_sig6(b.prop_diff) << "  z "
        << format_sig6(b.z_stat) << "  p " << format_sig6(b.p_value) << "\n";
    if (b.flagged) {
      out << "  WARNING: flagged at alpha " << format_sig6(b.alpha)
          << ": the discrepancy in non-initiation between arms (difference "
          << format_sig6(b.prop_diff)
          << ") is evidence that initiation depends on the assigned arm.\n";
    } else {
      out << "  not flagged at alpha " << format_sig6(b.alpha)
          << ". This balance cannot confirm the identifying assumption; the check can "
             "only find evidence against it.\n";
    }
  }

  out << "\nAppropriateness: ";
  if (!inputs.verdict) {
    out << "not assessed\n";
  } else if (inputs.verdict->appropriate) {
    out << "appropriate (both criteria satisfied)\n";
  } else {
    out << "NOT appropriate: " << inputs.verdict->reason << "\n";
  }

  out << "\n" << box1;

  AnalysisReport report;
  report.text = out.str();

  nlohmann::ordered_json envelope;
  envelope["trial"] = {{"name", inputs.trial_name}, {"intercurrent_event", event}};
  if (inputs.itt || inputs.mitt) {
    nlohmann::ordered_json estimates;
    estimates["itt"] = inputs.itt ? to_json(*inputs.itt) : nlohmann::ordered_json(nullptr);
    estimates["mitt"] = inputs.mitt ? to_json(*inputs.mitt) : nlohmann::ordered_json(nullptr);
    envelope["estimates"] = std::move(estimates);
  } else {
    envelope["estimates"] = nullptr;
  }
  envelope["balance"] = inputs.balance ? to_json(*inputs.balance) : nlohmann::ordered_json(nullptr);
  envelope["verdict"] = inputs.verdict ? to_json(*inputs.verdict) : nlohmann::ordered_json(nullptr);
  envelope["box1"] = box1;
  report.envelope = std::move(envelope);
  return report;
}

}  // namespace mitt
