#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "skilldepth/game/kernels.hpp"
#include "skilldepth/harness/config.hpp"
#include "skilldepth/opt/optimizers.hpp"

namespace skilldepth::harness {

struct SweepRecord {
  std::uint64_t index = 0;  // mixed-radix position in the space
  Genome genome;
  game::GameParams params;
  int trials = 0;
  double mean = 0;
  double se = 0;  // sample SD / sqrt(trials); 0 for a single trial
};

struct MeanSe {
  double mean;
  double se;
};
MeanSe mean_and_se(const std::vector<double>& xs);

// Points to sweep: all of them when config.sample is 0 or covers the space,
// otherwise a uniform subset without replacement. Ascending order.
std::vector<std::uint64_t> sweep_points(const ExperimentConfig& config);

// Plays config.sweep_trials() games of p1 vs p2 on every selected point.
std::vector<SweepRecord> sweep(const ExperimentConfig& config);

// Columns: index, one per dimension value (by short name), one genome index
// per dimension (g_<name>), trials, mean, se, rank. `rank` is the position
// of the row when all rows are sorted by ascending mean (ties by index).
void write_sweep_csv(std::ostream& out, const ExperimentConfig& config,
                     const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_sweep_csv(std::istream& in, const game::ParamSpace& space);

struct MarginalRow {
  double value;  // the dimension's legal value
  std::size_t count;
  double mean;
  double se;
};

// Groups records by one dimension (short name, e.g. "c"). Values absent
// from the records are omitted. Throws std::invalid_argument for an unknown
// dimension or empty input.
std::vector<MarginalRow> marginals(const std::vector<SweepRecord>& records,
                                   const game::ParamSpace& space, const std::string& dim);
// Population variance of the group means.
double between_group_variance(const std::vector<MarginalRow>& rows);
void write_marginals_csv(std::ostream& out, const ExperimentConfig& config, const std::string& dim,
                         const std::vector<MarginalRow>& rows);

// Mean GameValue of p1 vs p2 over `games` games seeded only by (seed, genome).
double audit_quality(const game::ParamSpace& space, const Genome& genome,
                     const agents::AgentSpec& p1, const agents::AgentSpec& p2, int games,
                     std::uint64_t seed);

struct CurvePoint {
  int generation;
  std::int64_t games_consumed;
  double best_fit_mean;
  double best_fit_se;
  // NaN on generations that were not audited.
  double quality_mean;
  double quality_se;
};

struct OptimizeOutput {
  std::vector<opt::OptResult> runs;
  std::vector<std::vector<opt::GenerationRecord>> logs;
  std::vector<CurvePoint> curve;
  // Audited quality of each run's final recommendation; empty without audit.
  std::vector<double> final_quality;
};

// `trials` independent runs of the configured optimizer. Audits every
// audit_stride-th generation and the last one with audit_games fresh games
// per recommended genome, outside the optimization budget.
OptimizeOutput optimize_experiment(const ExperimentConfig& config);

void write_curves_csv(std::ostream& out, const ExperimentConfig& config,
                      const std::vector<CurvePoint>& curve);
// First line: {"type":"config",...}; then one {"type":"generation",...} per
// generation per run.
void write_run_log(std::ostream& out, const ExperimentConfig& config,
                   const std::vector<std::vector<opt::GenerationRecord>>& logs);
std::string generation_json(int trial, const opt::GenerationRecord& rec);

struct ValidationRow {
  Genome genome;
  double win_rate_pct;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  double mean_pct = 0;
};

// Throws std::invalid_argument on an empty list or games < 1.
ValidationReport validate(const game::ParamSpace& space, const std::vector<Genome>& recommendations,
                          const agents::AgentSpec& p1, const agents::AgentSpec& p2, int games,
                          std::uint64_t seed, int jobs = 1);
void write_validation_csv(std::ostream& out, const ExperimentConfig& config,
                          const ValidationReport& report);
// Table-style percentage, four decimals.
std::string format_percent(double pct);

struct BenchResult {
  game::kernels::Isa isa;
  long long ticks;
  double seconds;
  double ticks_per_second;
};

// Forward-model throughput with scripted actions and no agents.
BenchResult bench(const game::GameParams& params, long long ticks, game::kernels::Isa isa);

// Parses a genome written as "1,2,3" or "(1,2,3)".
Genome parse_genome(const std::string& text);

// {"type":"config",...}: the first line of every JSON-lines artifact.
std::string config_record(const ExperimentConfig& config);
// "# key=value" lines for every config field.
void write_csv_metadata(std::ostream& out, const ExperimentConfig& config);

}  // namespace skilldepth::harness
