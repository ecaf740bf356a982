#include "mitt/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mitt/errors.hpp"

namespace mitt {

namespace {

constexpr double kProportionSumTolerance = 1e-12;

bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

double StratumProportions::of(PrincipalStratum stratum) const {
  switch (stratum) {
    case PrincipalStratum::AlwaysInitiator:
      return always;
    case PrincipalStratum::InterventionInitiator:
      return intervention;
    case PrincipalStratum::ControlInitiator:
      return control;
    case PrincipalStratum::NeverInitiator:
      return never;
  }
  return 0.0;
}

void StratumProportions::validate() const {
  for (PrincipalStratum s : kAllStrata) {
    if (!is_probability(of(s))) {
      throw ConfigError(std::string("stratum proportion for \"") + to_string(s) +
                        "\" must lie in [0,1]");
    }
  }
  if (std::abs(sum() - 1.0) > kProportionSumTolerance) {
    throw ConfigError("stratum proportions must sum to 1 (got " + std::to_string(sum()) + ")");
  }
}

double cell_mean(const OutcomeDist& dist) {
  return std::visit([](const auto& d) -> double {
    using T = std::decay_t<decltype(d)>;
    if constexpr (std::is_same_v<T, NormalOutcome>) {
      return d.mean;
    } else {
      return d.p;
    }
  }, dist);
}

double sample_outcome(const OutcomeDist& dist, Rng& rng) {
  return std::visit([&rng](const auto& d) -> double {
    using T = std::decay_t<decltype(d)>;
    if constexpr (std::is_same_v<T, NormalOutcome>) {
      if (d.sd == 0.0) return d.mean;  // point mass; no draw consumed
      std::normal_distribution<double> standard(0.0, 1.0);
      return d.mean + d.sd * standard(rng);
    } else {
      std::bernoulli_distribution coin(d.p);
      return coin(rng) ? 1.0 : 0.0;
    }
  }, dist);
}

void validate(const OutcomeDist& dist) {
  std::visit([](const auto& d) {
    using T = std::decay_t<decltype(d)>;
    if constexpr (std::is_same_v<T, NormalOutcome>) {
      if (!std::isfinite(d.mean)) throw ConfigError("normal outcome mean must be finite");
      if (!std::isfinite(d.sd) || d.sd < 0.0) {
        throw ConfigError("normal outcome sd must be finite and >= 0");
      }
    } else {
      if (!is_probability(d.p)) throw ConfigError("bernoulli outcome p must lie in [0,1]");
    }
  }, dist);
}

void OutcomeSpec::validate() const {
  for (const auto& row : cells) {
    for (const auto& dist : row) mitt::validate(dist);
  }
}

OutcomeSpec OutcomeSpec::filled_with(const OutcomeDist& dist) {
  OutcomeSpec spec;
  for (auto& row : spec.cells) row.fill(dist);
  return spec;
}

const char* to_string(Randomization scheme) {
  return scheme == Randomization::CompleteBalanced ? "complete_balanced" : "bernoulli";
}

void DgpConfig::validate() const {
  if (n < 2) throw ConfigError("trial size n must be at least 2");
  proportions.validate();
  outcomes.validate();
  if (randomization == Randomization::CompleteBalanced && n % 2 != 0) {
    throw ConfigError("complete balanced randomization requires an even trial size");
  }
}

std::vector<PotentialParticipant> generate_population(const DgpConfig& config, Rng& rng) {
  config.validate();

  // Cumulative mixture thresholds in stratum enum order.
  double cum[kNumStrata];
  double acc = 0.0;
  for (int s = 0; s < kNumStrata; ++s) {
    acc += config.proportions.of(static_cast<PrincipalStratum>(s));
    cum[s] = acc;
  }
  cum[kNumStrata - 1] = 1.0;  // absorb the summation tolerance

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PotentialParticipant> population;
  population.reserve(static_cast<std::size_t>(config.n));

  for (std::int64_t i = 0; i < config.n; ++i) {
    const double u = unit(rng);
    int s = 0;
    while (s < kNumStrata - 1 && u >= cum[s]) ++s;
    const auto stratum = static_cast<PrincipalStratum>(s);

    PotentialParticipant p;
    p.id = "p" + std::to_string(i + 1);
    p.outcome_intervention = sample_outcome(config.outcomes.cell(stratum, Arm::Intervention), rng);
    p.outcome_control = sample_outcome(config.outcomes.cell(stratum, Arm::Control), rng);
    p.initiates_intervention = initiates_under(stratum, Arm::Intervention);
    p.initiates_control = initiates_under(stratum, Arm::Control);
    population.push_back(std::move(p));
  }
  return population;
}

TrialDataset randomize_and_observe(const std::vector<PotentialParticipant>& population,
                                   Randomization scheme, Rng& rng) {
  if (population.empty()) throw ConfigError("cannot randomize an empty population");
  const std::size_t n = population.size();

  std::vector<Arm> arms(n, Arm::Control);
  if (scheme == Randomization::CompleteBalanced) {
    if (n % 2 != 0) {
      throw ConfigError("complete balanced randomization requires an even population size");
    }
    std::fill(arms.begin(), arms.begin() + static_cast<std::ptrdiff_t>(n / 2),
              Arm::Intervention);
    std::shuffle(arms.begin(), arms.end(), rng);
  } else {
    std::bernoulli_distribution coin(0.5);
    for (auto& arm : arms) arm = coin(rng) ? Arm::Intervention : Arm::Control;
  }

  TrialDataset data;
  data.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    data.records.push_back(observe(population[i], arms[i]));
  }
  return data;
}

TrialDataset simulate_trial(const DgpConfig& config, Rng& rng) {
  const auto population = generate_population(config, rng);
  return randomize_and_observe(population, config.randomization, rng);
}

TrialDataset simulate_trial(const DgpConfig& config) {
  Rng rng = make_rng(replication_seed(config.seed, 0));
  return simulate_trial(config, rng);
}

}  // namespace mitt
