#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "mitt/model.hpp"
#include "mitt/rng.hpp"

namespace mitt {

/// Mixture weights over the four principal strata. Must be in [0,1] and
/// sum to 1 within 1e-12.
struct StratumProportions {
  double always = 0.0;
  double intervention = 0.0;  // "intervention initiators"
  double control = 0.0;       // "control initiators"
  double never = 0.0;

  double of(PrincipalStratum stratum) const;
  double sum() const { return always + intervention + control + never; }
  void validate() const;  // throws ConfigError
};

struct NormalOutcome {
  double mean = 0.0;
  double sd = 1.0;  // sd == 0 gives a point mass at mean
};

struct BernoulliOutcome {
  double p = 0.5;  // outcomes are 0.0 / 1.0
};

using OutcomeDist = std::variant<NormalOutcome, BernoulliOutcome>;

/// Population mean of the cell distribution (Bernoulli contributes p).
double cell_mean(const OutcomeDist& dist);
double sample_outcome(const OutcomeDist& dist, Rng& rng);
void validate(const OutcomeDist& dist);  // throws ConfigError

/// Per (stratum, arm) outcome distributions: the full 4x2 grid.
struct OutcomeSpec {
  std::array<std::array<OutcomeDist, 2>, kNumStrata> cells{};

  OutcomeDist& cell(PrincipalStratum stratum, Arm arm) {
    return cells[static_cast<int>(stratum)][static_cast<int>(arm)];
  }
  const OutcomeDist& cell(PrincipalStratum stratum, Arm arm) const {
    return cells[static_cast<int>(stratum)][static_cast<int>(arm)];
  }
  double mean(PrincipalStratum stratum, Arm arm) const { return cell_mean(cell(stratum, arm)); }
  void validate() const;

  /// All eight cells set to the same distribution; fixtures then override
  /// the cells they care about.
  static OutcomeSpec filled_with(const OutcomeDist& dist);
};

enum class Randomization {
  CompleteBalanced,  // uniformly random subset of exactly n/2 to intervention
  Bernoulli,         // independent fair coin per participant
};

const char* to_string(Randomization scheme);

struct DgpConfig {
  std::int64_t n = 0;
  StratumProportions proportions;
  OutcomeSpec outcomes;
  Randomization randomization = Randomization::CompleteBalanced;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

/// Draws `config.n` participants i.i.d.: stratum from the mixture weights,
/// then (outcome_intervention, outcome_control) independently from the
/// stratum's two arm cells. Initiation indicators follow from the stratum.
/// Ids are "p1".."pN". Per-participant draw order is fixed (stratum,
/// intervention outcome, control outcome), so a given rng stream always
/// yields the same population.
std::vector<PotentialParticipant> generate_population(const DgpConfig& config, Rng& rng);

/// Assigns arms per `scheme` and projects through observe(). Record order
/// preserves population order. CompleteBalanced requires an even population.
TrialDataset randomize_and_observe(const std::vector<PotentialParticipant>& population,
                                   Randomization scheme, Rng& rng);

/// generate_population + randomize_and_observe on one rng stream.
TrialDataset simulate_trial(const DgpConfig& config, Rng& rng);

/// Single-dataset convenience: runs on the stream of replication 0 of
/// `config.seed`, i.e. equals the first replication of a Monte Carlo run.
TrialDataset simulate_trial(const DgpConfig& config);

}  // namespace mitt
