#include "mitt/verification.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <thread>

#include "mitt/errors.hpp"
#include "mitt/rng.hpp"
#include "mitt/stats.hpp"

namespace mitt {

namespace {

constexpr std::int64_t kMaxEnumerablePopulation = 16;

// Distinguishes sweep-row master seeds from replication seeds derived off
// the same base seed.
constexpr std::uint64_t kSweepSeedSalt = 0x73776565702D7277ULL;

}  // namespace

ExhaustiveResult exhaustive_expectation(const std::vector<PotentialParticipant>& population) {
  const auto n = static_cast<std::int64_t>(population.size());
  if (n < 2 || n > kMaxEnumerablePopulation || n % 2 != 0) {
    throw ConfigError("exhaustive enumeration needs an even population of size 2..16");
  }

  ExhaustiveResult result;
  double total = 0.0;

  // Gosper's hack walks every n/2-subset of n bits in increasing mask order;
  // set bits mark the intervention arm.
  const auto first = static_cast<std::uint32_t>((1u << (n / 2)) - 1u);
  const auto limit = static_cast<std::uint32_t>(1u << n);
  for (std::uint32_t mask = first; mask < limit;) {
    TrialDataset data;
    data.records.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
      const Arm arm = (mask >> i) & 1u ? Arm::Intervention : Arm::Control;
      data.records.push_back(observe(population[static_cast<std::size_t>(i)], arm));
    }
    try {
      total += mitt_estimate(data).estimate;
      ++result.defined_assignments;
    } catch (const NoInitiatorsError&) {
      ++result.undefined_assignments;
    }

    const std::uint32_t low = mask & (0u - mask);
    const std::uint32_t ripple = mask + low;
    mask = ripple | (((mask ^ ripple) >> 2) / low);
  }

  if (result.defined_assignments == 0) {
    throw AllUndefinedError(
        "the mITT estimator is undefined under every balanced assignment of this population");
  }
  result.mean_estimate = total / static_cast<double>(result.defined_assignments);
  return result;
}

double always_stratum_mean_difference(const std::vector<PotentialParticipant>& population) {
  RunningMoments intervention;
  RunningMoments control;
  for (const PotentialParticipant& p : population) {
    if (p.stratum() != PrincipalStratum::AlwaysInitiator) continue;
    intervention.add(p.outcome_intervention);
    control.add(p.outcome_control);
  }
  if (intervention.n == 0) {
    throw UndefinedEstimandError("no always-initiators in this population");
  }
  return intervention.mean - control.mean;
}

namespace {

PotentialParticipant always(std::string id, double y1, double y0) {
  return PotentialParticipant{.id = std::move(id),
                              .outcome_intervention = y1,
                              .outcome_control = y0,
                              .initiates_intervention = true,
                              .initiates_control = true};
}

PotentialParticipant never(std::string id, double y1, double y0) {
  return PotentialParticipant{.id = std::move(id),
                              .outcome_intervention = y1,
                              .outcome_control = y0,
                              .initiates_intervention = false,
                              .initiates_control = false};
}

}  // namespace

std::vector<ProofFixture> proof_fixture_family() {
  std::vector<ProofFixture> fixtures;

  fixtures.push_back({"n4 constant effect",
                      {always("a1", 1.0, 0.0), always("a2", 1.0, 0.0), always("a3", 1.0, 0.0),
                       always("a4", 1.0, 0.0)}});
  fixtures.push_back({"n4 heterogeneous",
                      {always("a1", 3.0, 1.0), always("a2", 5.0, 2.0), always("a3", 2.0, 2.0),
                       always("a4", 6.0, 3.0)}});
  fixtures.push_back({"n4 fractional negative",
                      {always("a1", -1.5, 2.25), always("a2", 0.5, -0.75),
                       always("a3", 2.5, 1.25), always("a4", -3.5, 0.25)}});
  fixtures.push_back({"n4 null effect",
                      {always("a1", 7.0, 7.0), always("a2", -2.0, -2.0), always("a3", 0.5, 0.5),
                       always("a4", 3.0, 3.0)}});

  fixtures.push_back({"n6 all always",
                      {always("a1", 10.0, 4.0), always("a2", -3.0, 0.5), always("a3", 2.0, 2.0),
                       always("a4", 8.0, -1.0), always("a5", 0.0, 6.0), always("a6", 1.5, 1.0)}});
  fixtures.push_back({"n6 one never",
                      {always("a1", 3.0, 1.0), always("a2", 5.0, 2.0), always("a3", 2.0, 2.0),
                       always("a4", 6.0, 3.0), always("a5", 4.0, 0.0),
                       never("n1", 100.0, -50.0)}});
  fixtures.push_back({"n6 binary outcomes",
                      {always("a1", 1.0, 0.0), always("a2", 1.0, 1.0), always("a3", 0.0, 0.0),
                       always("a4", 1.0, 0.0), always("a5", 0.0, 1.0), always("a6", 1.0, 0.0)}});
  fixtures.push_back({"n6 one never halves",
                      {always("a1", 2.5, 0.5), always("a2", -1.5, 1.0), always("a3", 3.0, -0.5),
                       always("a4", 0.5, 0.5), always("a5", 0.0, 2.0),
                       never("n1", 9.0, -9.0)}});

  fixtures.push_back({"n8 all always",
                      {always("a1", 2.0, 1.0), always("a2", 4.0, 3.0), always("a3", -1.0, 2.0),
                       always("a4", 0.0, 0.0), always("a5", 6.0, -2.0), always("a6", 3.5, 1.5),
                       always("a7", -4.0, -3.0), always("a8", 1.0, 5.0)}});
  fixtures.push_back({"n8 one never",
                      {always("a1", 2.0, 1.0), always("a2", 4.0, 3.0), always("a3", -1.0, 2.0),
                       always("a4", 0.0, 0.0), always("a5", 6.0, -2.0), always("a6", 3.5, 1.5),
                       always("a7", -4.0, -3.0), never("n1", 50.0, 50.0)}});
  fixtures.push_back({"n8 two never",
                      {always("a1", 3.0, 1.0), always("a2", 5.0, 2.0), always("a3", 2.0, 2.0),
                       always("a4", 6.0, 3.0), always("a5", 4.0, 0.0), always("a6", 1.0, 1.0),
                       never("n1", 100.0, -50.0), never("n2", -7.0, 9.0)}});
  fixtures.push_back({"n8 two never fractional",
                      {always("a1", 0.125, -0.25), always("a2", -1.75, 0.5),
                       always("a3", 2.375, 1.125), always("a4", 0.625, -0.875),
                       always("a5", 1.5, 0.25), always("a6", -0.5, 2.75),
                       never("n1", 3.25, 3.25), never("n2", -8.5, 8.5)}});

  return fixtures;
}

std::vector<ProofCheckRow> run_proof_checks(double tolerance) {
  std::vector<ProofCheckRow> rows;
  for (const ProofFixture& fixture : proof_fixture_family()) {
    const ExhaustiveResult ex = exhaustive_expectation(fixture.population);
    const double direct = always_stratum_mean_difference(fixture.population);
    ProofCheckRow row;
    row.name = fixture.name;
    row.enumeration_mean = ex.mean_estimate;
    row.always_stratum_mean_diff = direct;
    row.undefined_assignments = ex.undefined_assignments;
    row.abs_error = std::abs(ex.mean_estimate - direct);
    row.pass = row.abs_error <= tolerance;
    rows.push_back(std::move(row));
  }
  return rows;
}

McSummary run_mc(const DgpConfig& config, std::int64_t replications, double level,
                 int threads) {
  config.validate();
  if (replications < 2) throw ConfigError("monte carlo runs need at least 2 replications");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("confidence level must lie in (0,1)");
  const double oracle = oracle_ps_estimand(config);
  const double analytic_limit = analytic_mitt_limit(config);

  struct Replication {
    double estimate = 0.0;
    bool failed = false;
    bool covered = false;
  };
  std::vector<Replication> results(static_cast<std::size_t>(replications));

  auto run_range = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      Rng rng = make_rng(replication_seed(config.seed, static_cast<std::uint64_t>(r)));
      const TrialDataset data = simulate_trial(config, rng);
      auto& slot = results[static_cast<std::size_t>(r)];
      try {
        const EstimateResult est = mitt_estimate(data, level);
        slot.estimate = est.estimate;
        slot.covered = est.inference_defined() && *est.ci_low <= oracle && oracle <= *est.ci_high;
      } catch (const NoInitiatorsError&) {
        slot.failed = true;
      }
    }
  };

  int worker_count = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (worker_count < 1) worker_count = 1;
  if (worker_count > replications) worker_count = static_cast<int>(replications);

  if (worker_count == 1) {
    run_range(0, replications);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(worker_count));
    const std::int64_t chunk = (replications + worker_count - 1) / worker_count;
    for (int w = 0; w < worker_count; ++w) {
      const std::int64_t begin = w * chunk;
      const std::int64_t end = std::min(replications, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  // Deterministic reduction: replication index order, regardless of how the
  // work was split above.
  RunningMoments moments;
  std::int64_t covered = 0;
  std::int64_t failed = 0;
  for (const Replication& rep : results) {
    if (rep.failed) {
      ++failed;
      continue;
    }
    moments.add(rep.estimate);
    if (rep.covered) ++covered;
  }
  if (moments.n == 0) {
    throw AllUndefinedError("every replication raised NoInitiatorsError");
  }

  McSummary summary;
  summary.replications = replications;
  summary.n_failed = failed;
  summary.mean_estimate = moments.mean;
  summary.empirical_sd = moments.n >= 2 ? std::sqrt(moments.variance()) : 0.0;
  summary.mc_se = summary.empirical_sd / std::sqrt(static_cast<double>(moments.n));
  summary.oracle = oracle;
  summary.bias = summary.mean_estimate - oracle;
  summary.analytic_limit = analytic_limit;
  summary.ci_coverage = static_cast<double>(covered) / static_cast<double>(moments.n);
  return summary;
}

std::vector<SweepRow> assumption_violation_sweep(const DgpConfig& base,
                                                 const std::vector<double>& violation_grid,
                                                 std::int64_t replications, double level,
                                                 int threads) {
  base.validate();
  std::vector<SweepRow> rows;
  rows.reserve(violation_grid.size());

  for (std::size_t i = 0; i < violation_grid.size(); ++i) {
    const double g = violation_grid[i];
    if (!(g >= 0.0 && g < 0.5)) {
      throw ConfigError("violation grid values must lie in [0, 0.5)");
    }
    DgpConfig config = base;
    config.proportions.intervention = g;
    config.proportions.control = g;
    config.proportions.always = 1.0 - base.proportions.never - 2.0 * g;
    if (config.proportions.always <= 0.0) {
      throw ConfigError("violation level leaves the always-initiators stratum empty");
    }
    config.seed = replication_seed(base.seed ^ kSweepSeedSalt, static_cast<std::uint64_t>(i));

    const McSummary mc = run_mc(config, replications, level, threads);
    rows.push_back(SweepRow{
        .pi_violation = g,
        .analytic_bias = mc.analytic_limit - mc.oracle,
        .mc_bias = mc.bias,
        .mc_se = mc.mc_se,
        .n_failed = mc.n_failed,
    });
  }
  return rows;
}

}  // namespace mitt
