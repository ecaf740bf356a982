#pragma once

#include <cstdint>
#include <vector>

#include "mitt/dgp.hpp"
#include "mitt/estimators.hpp"
#include "mitt/model.hpp"

namespace mitt {

struct ExhaustiveResult {
  double mean_estimate = 0.0;  // average over assignments where mITT is defined
  std::int64_t defined_assignments = 0;
  std::int64_t undefined_assignments = 0;
};

/// Exact expectation of the mITT estimator over every balanced assignment
/// of a small finite population (n even, 2 <= n <= 16; all C(n, n/2)
/// subsets enumerated). Assignments where an arm has no initiators are
/// dropped and counted; defined assignments are weighted equally. Each
/// assignment is evaluated through observe() + mitt_estimate, the same
/// path analysis code uses.
/// Throws ConfigError on a bad population size, AllUndefinedError when no
/// assignment is defined.
ExhaustiveResult exhaustive_expectation(const std::vector<PotentialParticipant>& population);

struct McSummary {
  std::int64_t replications = 0;  // requested; = successful + n_failed
  std::int64_t n_failed = 0;      // replications where the estimator was undefined
  double mean_estimate = 0.0;     // over successful replications
  double empirical_sd = 0.0;
  double mc_se = 0.0;             // empirical_sd / sqrt(successful count)
  double oracle = 0.0;            // principal-stratum estimand under the config
  double bias = 0.0;              // mean_estimate - oracle
  double analytic_limit = 0.0;
  double ci_coverage = 0.0;       // share of successful replications whose CI covers oracle
};

/// Monte Carlo harness: simulates `replications` independent trials from
/// `config` (replication r on the stream of replication_seed(config.seed, r))
/// and aggregates the mITT estimates. Replications raising NoInitiatorsError
/// are counted in n_failed and excluded from the moments; replications whose
/// CI is undefined count as not covering.
///
/// `threads` <= 0 picks the hardware concurrency. Results are identical for
/// any thread count: per-replication streams are index-derived and the
/// reduction runs in replication order.
McSummary run_mc(const DgpConfig& config, std::int64_t replications, double level = 0.95,
                 int threads = 1);

/// Finite-population mean difference inside the always-initiators stratum:
/// the quantity the enumeration must reproduce when the identifying
/// assumption holds. Computed directly from the counterfactual records,
/// independent of the estimator path.
/// Throws UndefinedEstimandError when the stratum is empty.
double always_stratum_mean_difference(const std::vector<PotentialParticipant>& population);

struct ProofFixture {
  std::string name;
  std::vector<PotentialParticipant> population;
};

/// Twelve hand-built populations (n in {4,6,8}; always/never strata only;
/// few enough never-initiators that every balanced split keeps at least two
/// always-initiators per arm). On each of these the enumeration average
/// must equal the always-stratum mean difference exactly.
std::vector<ProofFixture> proof_fixture_family();

struct ProofCheckRow {
  std::string name;
  double enumeration_mean = 0.0;
  double always_stratum_mean_diff = 0.0;
  std::int64_t undefined_assignments = 0;
  double abs_error = 0.0;
  bool pass = false;
};

/// Runs exhaustive_expectation over the fixture family and compares each
/// result against the direct stratum mean difference.
std::vector<ProofCheckRow> run_proof_checks(double tolerance = 1e-12);

struct SweepRow {
  double pi_violation = 0.0;
  double analytic_bias = 0.0;
  double mc_bias = 0.0;
  double mc_se = 0.0;
  std::int64_t n_failed = 0;
};

/// Re-runs the MC harness along a grid of assumption-violation levels: at
/// grid value g the two violating strata each get mass g, the never mass is
/// kept from `base`, and the always mass absorbs the remainder. Outcome
/// cells are untouched. Grid values must lie in [0, 0.5) and leave the
/// always stratum with positive mass.
std::vector<SweepRow> assumption_violation_sweep(const DgpConfig& base,
                                                 const std::vector<double>& violation_grid,
                                                 std::int64_t replications, double level = 0.95,
                                                 int threads = 1);

}  // namespace mitt
