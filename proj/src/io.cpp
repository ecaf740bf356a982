#include "mitt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_set>

#include "mitt/errors.hpp"

namespace mitt {

namespace {

constexpr std::string_view kCsvHeader = "participant_id,arm,initiated,outcome";

// Shortest round-trip decimal form; keeps written datasets value-exact.
std::string double_to_string(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

bool parse_binary(std::string_view field, bool& out) {
  if (field == "0") {
    out = false;
    return true;
  }
  if (field == "1") {
    out = true;
    return true;
  }
  return false;
}

bool parse_finite_double(std::string_view field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

TrialDataset parse_dataset_csv(std::istream& in, const std::string& name) {
  TrialDataset data;
  data.metadata.name = name;

  std::string line;
  long line_number = 0;

  if (!std::getline(in, line)) throw ParseError("empty file: expected a header row", 1);
  ++line_number;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw ParseError("bad header: expected \"" + std::string(kCsvHeader) + "\"", line_number);
  }

  std::unordered_set<std::string> seen_ids;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;  // trailing newline

    const auto fields = split_fields(line);
    if (fields.size() != 4) {
      throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), line_number);
    }

    ObservedRecord record;
    record.id = std::string(fields[0]);
    if (record.id.empty()) throw ParseError("empty participant_id", line_number);
    if (!seen_ids.insert(record.id).second) {
      throw ParseError("duplicate participant_id \"" + record.id + "\"", line_number);
    }

    bool flag = false;
    if (!parse_binary(fields[1], flag)) {
      throw ParseError("arm must be 0 or 1, got \"" + std::string(fields[1]) + "\"",
                       line_number);
    }
    record.arm = flag ? Arm::Intervention : Arm::Control;

    if (!parse_binary(fields[2], flag)) {
      throw ParseError("initiated must be 0 or 1, got \"" + std::string(fields[2]) + "\"",
                       line_number);
    }
    record.initiated = flag;

    if (!parse_finite_double(fields[3], record.outcome)) {
      throw ParseError("outcome must be a finite decimal, got \"" + std::string(fields[3]) +
                           "\"",
                       line_number);
    }
    data.records.push_back(std::move(record));
  }
  return data;
}

TrialDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file: " + path.string());
  return parse_dataset_csv(in, path.stem().string());
}

void write_dataset_csv(const TrialDataset& data, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const ObservedRecord& record : data.records) {
    out << record.id << ',' << (record.arm == Arm::Intervention ? '1' : '0') << ','
        << (record.initiated ? '1' : '0') << ',' << double_to_string(record.outcome) << "\n";
  }
}

std::string dataset_to_csv(const TrialDataset& data) {
  std::ostringstream out;
  write_dataset_csv(data, out);
  return out.str();
}

namespace {

using Json = nlohmann::json;

void require_keys(const Json& obj, const std::string& where,
                  std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (std::string_view key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
  }
}

double read_number(const Json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError("missing key \"" + key + "\" in " + where);
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("\"" + where + "." + key + "\" must be a number");
  return v.get<double>();
}

OutcomeDist parse_outcome_dist(const Json& obj, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  if (!obj.contains("dist")) throw ConfigError("missing key \"dist\" in " + where);
  const std::string kind = obj.at("dist").is_string() ? obj.at("dist").get<std::string>() : "";
  if (kind == "normal") {
    require_keys(obj, where, {"dist", "mean", "sd"});
    return NormalOutcome{.mean = read_number(obj, where, "mean"),
                         .sd = read_number(obj, where, "sd")};
  }
  if (kind == "bernoulli") {
    require_keys(obj, where, {"dist", "p"});
    return BernoulliOutcome{.p = read_number(obj, where, "p")};
  }
  throw ConfigError("\"" + where + ".dist\" must be \"normal\" or \"bernoulli\"");
}

constexpr std::string_view kStratumKeys[kNumStrata] = {"always", "intervention", "control",
                                                       "never"};

}  // namespace

SimulationConfig parse_simulation_config(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  require_keys(doc, "config", {"trial", "n", "seed", "randomization", "proportions",
                               "outcomes", "mc"});

  SimulationConfig config;

  if (doc.contains("trial")) {
    const Json& trial = doc.at("trial");
    if (!trial.is_object()) throw ConfigError("\"trial\" must be an object");
    require_keys(trial, "trial", {"name", "intercurrent_event"});
    if (trial.contains("name")) config.trial.name = trial.at("name").get<std::string>();
    if (trial.contains("intercurrent_event")) {
      config.trial.intercurrent_event = trial.at("intercurrent_event").get<std::string>();
    }
  }

  if (!doc.contains("n")) throw ConfigError("missing key \"n\" in config");
  if (!doc.at("n").is_number_integer() || doc.at("n").get<std::int64_t>() < 1) {
    throw ConfigError("\"n\" must be a positive integer");
  }
  config.dgp.n = doc.at("n").get<std::int64_t>();

  config.dgp.seed = 42;
  if (doc.contains("seed")) {
    const Json& seed = doc.at("seed");
    if (seed.is_number_unsigned()) {
      config.dgp.seed = seed.get<std::uint64_t>();
    } else if (seed.is_number_integer() && seed.get<std::int64_t>() >= 0) {
      config.dgp.seed = static_cast<std::uint64_t>(seed.get<std::int64_t>());
    } else {
      throw ConfigError("\"seed\" must be a non-negative integer");
    }
  }

  if (doc.contains("randomization")) {
    const std::string scheme = doc.at("randomization").is_string()
                                   ? doc.at("randomization").get<std::string>()
                                   : "";
    if (scheme == "complete_balanced") {
      config.dgp.randomization = Randomization::CompleteBalanced;
    } else if (scheme == "bernoulli") {
      config.dgp.randomization = Randomization::Bernoulli;
    } else {
      throw ConfigError("\"randomization\" must be \"complete_balanced\" or \"bernoulli\"");
    }
  }

  if (!doc.contains("proportions")) throw ConfigError("missing key \"proportions\" in config");
  const Json& proportions = doc.at("proportions");
  if (!proportions.is_object()) throw ConfigError("\"proportions\" must be an object");
  require_keys(proportions, "proportions", {"always", "intervention", "control", "never"});
  config.dgp.proportions.always = read_number(proportions, "proportions", "always");
  config.dgp.proportions.intervention = read_number(proportions, "proportions", "intervention");
  config.dgp.proportions.control = read_number(proportions, "proportions", "control");
  config.dgp.proportions.never = read_number(proportions, "proportions", "never");

  if (!doc.contains("outcomes")) throw ConfigError("missing key \"outcomes\" in config");
  const Json& outcomes = doc.at("outcomes");
  if (!outcomes.is_object()) throw ConfigError("\"outcomes\" must be an object");
  require_keys(outcomes, "outcomes", {"always", "intervention", "control", "never"});
  for (int s = 0; s < kNumStrata; ++s) {
    const std::string stratum_key(kStratumKeys[s]);
    if (!outcomes.contains(stratum_key)) {
      throw ConfigError("missing stratum \"" + stratum_key + "\" in outcomes");
    }
    const Json& row = outcomes.at(stratum_key);
    if (!row.is_object()) throw ConfigError("\"outcomes." + stratum_key + "\" must be an object");
    require_keys(row, "outcomes." + stratum_key, {"control", "intervention"});
    for (Arm arm : {Arm::Control, Arm::Intervention}) {
      const std::string arm_key = to_string(arm);
      if (!row.contains(arm_key)) {
        throw ConfigError("missing arm \"" + arm_key + "\" in outcomes." + stratum_key);
      }
      config.dgp.outcomes.cell(static_cast<PrincipalStratum>(s), arm) =
          parse_outcome_dist(row.at(arm_key), "outcomes." + stratum_key + "." + arm_key);
    }
  }

  if (doc.contains("mc")) {
    const Json& mc = doc.at("mc");
    if (!mc.is_object()) throw ConfigError("\"mc\" must be an object");
    require_keys(mc, "mc", {"replications", "level", "alpha"});
    if (mc.contains("replications")) {
      if (!mc.at("replications").is_number_integer() ||
          mc.at("replications").get<std::int64_t>() < 2) {
        throw ConfigError("\"mc.replications\" must be an integer >= 2");
      }
      config.mc.replications = mc.at("replications").get<std::int64_t>();
    }
    if (mc.contains("level")) config.mc.level = read_number(mc, "mc", "level");
    if (mc.contains("alpha")) config.mc.alpha = read_number(mc, "mc", "alpha");
  }
  if (!(config.mc.level > 0.0 && config.mc.level < 1.0)) {
    throw ConfigError("\"mc.level\" must lie in (0,1)");
  }
  if (!(config.mc.alpha > 0.0 && config.mc.alpha < 1.0)) {
    throw ConfigError("\"mc.alpha\" must lie in (0,1)");
  }

  config.dgp.validate();
  return config;
}

SimulationConfig load_simulation_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& err) {
    throw ParseError("config is not valid JSON: " + std::string(err.what()));
  }
  return parse_simulation_config(doc);
}

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& value) {
  if (value) return *value;
  return nullptr;
}

}  // namespace

nlohmann::ordered_json to_json(const EstimateResult& result) {
  nlohmann::ordered_json j;
  j["estimate"] = result.estimate;
  j["se"] = optional_number(result.se);
  j["ci_low"] = optional_number(result.ci_low);
  j["ci_high"] = optional_number(result.ci_high);
  j["level"] = result.level;
  j["n_analyzed_intervention"] = result.n_analyzed_intervention;
  j["n_analyzed_control"] = result.n_analyzed_control;
  return j;
}

nlohmann::ordered_json to_json(const BalanceReport& report) {
  nlohmann::ordered_json j;
  j["n_intervention"] = report.n_intervention;
  j["n_control"] = report.n_control;
  j["noninit_intervention"] = report.noninit_intervention;
  j["noninit_control"] = report.noninit_control;
  j["prop_diff"] = report.prop_diff;
  j["z_stat"] = report.z_stat;
  j["p_value"] = report.p_value;
  j["alpha"] = report.alpha;
  j["flagged"] = report.flagged;
  return j;
}

nlohmann::ordered_json to_json(const Verdict& verdict) {
  nlohmann::ordered_json j;
  j["appropriate"] = verdict.appropriate;
  j["reason"] = verdict.appropriate ? nlohmann::ordered_json(nullptr)
                                    : nlohmann::ordered_json(verdict.reason);
  return j;
}

nlohmann::ordered_json to_json(const McSummary& summary) {
  nlohmann::ordered_json j;
  j["replications"] = summary.replications;
  j["n_failed"] = summary.n_failed;
  j["mean_estimate"] = summary.mean_estimate;
  j["empirical_sd"] = summary.empirical_sd;
  j["mc_se"] = summary.mc_se;
  j["oracle"] = summary.oracle;
  j["bias"] = summary.bias;
  j["analytic_limit"] = summary.analytic_limit;
  j["ci_coverage"] = summary.ci_coverage;
  return j;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "pi_violation,analytic_bias,mc_bias,mc_se,n_failed\n";
  for (const SweepRow& row : rows) {
    out << double_to_string(row.pi_violation) << ',' << double_to_string(row.analytic_bias)
        << ',' << double_to_string(row.mc_bias) << ',' << double_to_string(row.mc_se) << ','
        << row.n_failed << "\n";
  }
  return out.str();
}

}  // namespace mitt
