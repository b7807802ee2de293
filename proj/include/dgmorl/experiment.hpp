#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dgmorl/metrics.hpp"
#include "dgmorl/run_config.hpp"

namespace dgmorl {

std::unique_ptr<Env> make_env(const EnvConfig& cfg);

/// Initial demonstration action lists for the configured source.
std::vector<std::vector<int>> resolve_demos(Env& env, const DemoSource& src);

/// Scalarized epsilon-greedy control from a zero-initialized table: each
/// episode conditions on one eval-grid weight drawn uniformly. No
/// demonstrations, no curriculum; same eval cadence and record layout as the
/// curriculum runs, with the episode count in the round field.
MetricsLog baseline_train(Env& env, const CurriculumConfig& cfg);

/// Runs one seed end to end. When out_dir is nonempty, writes metrics.log,
/// config.snapshot, and (for curriculum runs) repository.txt into it.
MetricsLog run_one_seed(const RunConfig& cfg, std::uint64_t seed, const std::string& out_dir);

struct ExperimentResult {
    std::vector<std::uint64_t> seeds;
    std::vector<MetricsLog> logs; // one per seed, in config order
};

/// Fans the seeds out in parallel, one subdirectory per seed under
/// cfg.output, then writes report.csv and report.txt aggregated across seeds.
ExperimentResult run_experiment(const RunConfig& cfg);

/// Mean/min/max expected utility per eval step across runs, as CSV. All runs
/// must share the same nominal step sequence (StepMisalignment otherwise);
/// an empty input raises MissingRuns.
std::string report_csv(const std::vector<std::string>& log_texts);

/// Same aggregation as a fixed-width table with +above/-below spreads.
std::string report_table(const std::vector<std::string>& log_texts);

void write_file(const std::string& path, const std::string& content);

} // namespace dgmorl
