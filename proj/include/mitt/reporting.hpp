#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "mitt/diagnostics.hpp"
#include "mitt/estimators.hpp"

namespace mitt {

struct ReportInputs {
  std::string trial_name;
  std::string intercurrent_event;   // e.g. "failure to initiate treatment"
  std::string estimand_statement;   // optional override for the stock section 1 text
  std::string assumption_justification;  // required non-empty for an Appropriate verdict
  std::optional<EstimateResult> itt;
  std::optional<EstimateResult> mitt;
  std::optional<BalanceReport> balance;
  std::optional<Verdict> verdict;  // nullopt: appropriateness not assessed
};

/// The four-section reporting block: (1) estimand with the principal stratum
/// strategy, (2) estimator with the exclusion rule, (3) the unbiasedness
/// assumptions naming both violating initiator classes, (4) the
/// trial-specific justification (replaced by a warning when the verdict is
/// negative, or a notice when unassessed).
/// Throws MissingJustificationError for an Appropriate verdict with empty
/// justification text.
std::string emit_box1(const ReportInputs& inputs);

struct AnalysisReport {
  std::string text;                 // human-readable; numbers at 6 significant digits
  nlohmann::ordered_json envelope;  // same numbers, unrounded
};

/// Side-by-side ITT / mITT table, balance diagnostic with its partial-check
/// caveat, verdict, and the reporting block. Requires at least one of
/// estimates or balance.
AnalysisReport emit_analysis_report(const ReportInputs& inputs);

/// Prose rounding rule used throughout reports: 6 significant digits.
std::string format_sig6(double value);

}  // namespace mitt
