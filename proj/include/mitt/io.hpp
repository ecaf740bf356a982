#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mitt/diagnostics.hpp"
#include "mitt/dgp.hpp"
#include "mitt/estimators.hpp"
#include "mitt/model.hpp"
#include "mitt/verification.hpp"

namespace mitt {

/// Observed-dataset CSV schema. Header is exactly
/// `participant_id,arm,initiated,outcome`; arm and initiated are 0/1;
/// outcome is a finite decimal; ids are unique. Malformed input raises
/// ParseError with the offending line number.
TrialDataset load_dataset(const std::filesystem::path& path);
TrialDataset parse_dataset_csv(std::istream& in, const std::string& name);

void write_dataset_csv(const TrialDataset& data, std::ostream& out);
std::string dataset_to_csv(const TrialDataset& data);

struct McSettings {
  std::int64_t replications = 10000;
  double level = 0.95;
  double alpha = 0.05;
};

/// The declarative simulation config: every DgpConfig field plus MC
/// settings and report metadata. Loaded from strict JSON: unknown keys
/// are rejected, proportions and outcome cells validated at load.
struct SimulationConfig {
  DgpConfig dgp;
  McSettings mc;
  TrialMetadata trial;
};

SimulationConfig load_simulation_config(const std::filesystem::path& path);
SimulationConfig parse_simulation_config(const nlohmann::json& doc);

nlohmann::ordered_json to_json(const EstimateResult& result);
nlohmann::ordered_json to_json(const BalanceReport& report);
nlohmann::ordered_json to_json(const Verdict& verdict);
nlohmann::ordered_json to_json(const McSummary& summary);

/// Sweep CSV: header `pi_violation,analytic_bias,mc_bias,mc_se,n_failed`.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace mitt
