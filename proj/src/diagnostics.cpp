#include "mitt/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "mitt/errors.hpp"
#include "mitt/stats.hpp"

namespace mitt {

BalanceReport initiation_balance(const TrialDataset& data, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");

  BalanceReport report;
  report.alpha = alpha;
  for (const ObservedRecord& record : data.records) {
    if (record.arm == Arm::Intervention) {
      ++report.n_intervention;
      if (!record.initiated) ++report.noninit_intervention;
    } else {
      ++report.n_control;
      if (!record.initiated) ++report.noninit_control;
    }
  }
  if (report.n_intervention == 0) throw EmptyArmError(to_string(Arm::Intervention));
  if (report.n_control == 0) throw EmptyArmError(to_string(Arm::Control));

  const double n1 = static_cast<double>(report.n_intervention);
  const double n0 = static_cast<double>(report.n_control);
  const double p1 = static_cast<double>(report.noninit_intervention) / n1;
  const double p0 = static_cast<double>(report.noninit_control) / n0;
  const double pooled =
      static_cast<double>(report.noninit_intervention + report.noninit_control) / (n1 + n0);

  report.prop_diff = p1 - p0;
  if (pooled == 0.0 || pooled == 1.0) {
    // Degenerate pooled proportion: no evidence either way by convention.
    report.z_stat = 0.0;
    report.p_value = 1.0;
  } else {
    const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n0));
    report.z_stat = report.prop_diff / se;
    report.p_value = 2.0 * normal_upper_tail(std::abs(report.z_stat));
  }
  report.flagged = report.p_value < alpha;
  return report;
}

Verdict mitt_appropriateness(const AppropriatenessInput& input) {
  if (!input.event_identifiable_both_arms) {
    return Verdict{
        .appropriate = false,
        .reason = "the intercurrent event cannot be identified in both treatment arms, so "
                  "the principal stratum of interest cannot be identified",
    };
  }
  if (!input.allocation_independent_of_event) {
    return Verdict{
        .appropriate = false,
        .reason = "the occurrence of the intercurrent event may depend on the allocated "
                  "treatment arm, so the excluded analysis populations are not comparable",
    };
  }
  return Verdict{.appropriate = true, .reason = ""};
}

namespace {

struct StrataTableRows {
  // Either expected shares (config source) or realized counts (population
  // source); share is always populated.
  double share[kNumStrata] = {};
  std::int64_t count[kNumStrata] = {};
  bool has_counts = false;
  std::int64_t total = 0;
};

std::string render(const StrataTableRows& rows) {
  std::ostringstream out;
  out << "Principal strata and per-arm initiation (mITT analysis cells marked *)\n";
  char line[160];
  std::snprintf(line, sizeof(line), "  %-24s %-14s %-14s %s\n", "stratum", "control",
                "intervention", rows.has_counts ? "count (share)" : "share");
  out << line;

  for (int s = 0; s < kNumStrata; ++s) {
    const auto stratum = static_cast<PrincipalStratum>(s);
    const bool empty = rows.has_counts ? rows.count[s] == 0 : rows.share[s] == 0.0;

    auto initiation_cell = [&](Arm arm) -> std::string {
      const bool yes = initiates_under(stratum, arm);
      if (empty) return yes ? "yes" : "no";
      // A "yes" cell is exactly a cell the mITT comparison draws from.
      return yes ? "yes *" : "no";
    };

    std::string tail;
    if (rows.has_counts) {
      std::snprintf(line, sizeof(line), "%lld (%.4f)", static_cast<long long>(rows.count[s]),
                    static_cast<double>(rows.count[s]) / static_cast<double>(rows.total));
      tail = line;
    } else {
      std::snprintf(line, sizeof(line), "%.4f", rows.share[s]);
      tail = line;
    }
    if (empty) tail += "  [empty stratum]";

    std::snprintf(line, sizeof(line), "  %-24s %-14s %-14s %s\n", to_string(stratum),
                  initiation_cell(Arm::Control).c_str(),
                  initiation_cell(Arm::Intervention).c_str(), tail.c_str());
    out << line;
  }
  out << "  * cell enters the mITT analysis population for that arm\n";
  return out.str();
}

}  // namespace

std::string strata_table(const StrataTableSource& source) {
  return std::visit(
      [](const auto& src) -> std::string {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, DgpConfig>) {
          src.validate();
          StrataTableRows rows;
          for (int s = 0; s < kNumStrata; ++s) {
            rows.share[s] = src.proportions.of(static_cast<PrincipalStratum>(s));
          }
          return render(rows);
        } else if constexpr (std::is_same_v<T, std::vector<PotentialParticipant>>) {
          if (src.empty()) throw ConfigError("cannot tabulate an empty population");
          StrataTableRows rows;
          rows.has_counts = true;
          rows.total = static_cast<std::int64_t>(src.size());
          for (const PotentialParticipant& p : src) {
            ++rows.count[static_cast<int>(p.stratum())];
          }
          return render(rows);
        } else {
          throw CounterfactualUnavailableError(
              "stratum membership is not observable from one arm's data; the strata "
              "table needs a counterfactual population or a DGP configuration");
        }
      },
      source);
}

}  // namespace mitt
