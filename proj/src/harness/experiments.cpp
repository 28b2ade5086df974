#include "skilldepth/harness/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "skilldepth/eval/evaluation.hpp"
#include "skilldepth/parallel.hpp"

namespace skilldepth::harness {

namespace {

// Stream tags keep the seeds of different experiment stages independent.
constexpr std::uint64_t kSweepStream = 0x5357454550ULL;
constexpr std::uint64_t kSampleStream = 0x53414d504cULL;
constexpr std::uint64_t kRunStream = 0x52554eULL;
constexpr std::uint64_t kFitnessStream = 0x464954ULL;
constexpr std::uint64_t kAuditStream = 0x4155444954ULL;
constexpr std::uint64_t kValidateStream = 0x56414c4944ULL;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

MeanSe mean_and_se(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean of an empty sample");
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() == 1) return {mean, 0.0};
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1)) / std::sqrt(n)};
}

std::vector<std::uint64_t> sweep_points(const ExperimentConfig& config) {
  const game::ParamSpace space = config.space();
  const std::uint64_t total = space.cardinality();
  std::vector<std::uint64_t> all(total);
  std::iota(all.begin(), all.end(), 0);
  const auto k = static_cast<std::uint64_t>(config.sample);
  if (k == 0 || k >= total) return all;
  Rng rng(mix_seed({config.seed, kSampleStream}));
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t j = i + rng.below(static_cast<std::uint32_t>(total - i));
    std::swap(all[i], all[j]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<SweepRecord> sweep(const ExperimentConfig& config) {
  config.validate();
  const game::ParamSpace space = config.space();
  const std::vector<std::uint64_t> points = sweep_points(config);
  const int t = config.sweep_trials();
  std::vector<SweepRecord> records(points.size());
  parallel_for(points.size(), config.jobs, [&](std::size_t i) {
    SweepRecord& rec = records[i];
    rec.index = points[i];
    rec.genome = space.genome_at(points[i]);
    rec.params = game::params_from_genome(space, rec.genome);
    rec.trials = t;
    std::vector<double> values(static_cast<std::size_t>(t));
    for (int j = 0; j < t; ++j) {
      values[static_cast<std::size_t>(j)] = eval::play_game(
          rec.params, config.p1, config.p2,
          mix_seed({config.seed, kSweepStream, rec.index, static_cast<std::uint64_t>(j)}));
    }
    const MeanSe ms = mean_and_se(values);
    rec.mean = ms.mean;
    rec.se = ms.se;
  });
  return records;
}

std::vector<MarginalRow> marginals(const std::vector<SweepRecord>& records,
                                   const game::ParamSpace& space, const std::string& dim) {
  if (records.empty()) throw std::invalid_argument("no records to group");
  const int d = space.find(game::field_from_name(dim));
  if (d < 0) throw std::invalid_argument("dimension '" + dim + "' is not in this space");
  const auto& values = space.dim(static_cast<std::size_t>(d)).values;
  std::vector<std::vector<double>> groups(values.size());
  for (const SweepRecord& r : records) {
    groups.at(static_cast<std::size_t>(r.genome.at(static_cast<std::size_t>(d)))).push_back(r.mean);
  }
  std::vector<MarginalRow> rows;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (groups[k].empty()) continue;
    const MeanSe ms = mean_and_se(groups[k]);
    rows.push_back({values[k], groups[k].size(), ms.mean, ms.se});
  }
  return rows;
}

double between_group_variance(const std::vector<MarginalRow>& rows) {
  if (rows.empty()) return 0;
  double mean = 0;
  for (const auto& r : rows) mean += r.mean;
  mean /= static_cast<double>(rows.size());
  double var = 0;
  for (const auto& r : rows) var += (r.mean - mean) * (r.mean - mean);
  return var / static_cast<double>(rows.size());
}

double audit_quality(const game::ParamSpace& space, const Genome& genome,
                     const agents::AgentSpec& p1, const agents::AgentSpec& p2, int games,
                     std::uint64_t seed) {
  if (games < 1) throw std::invalid_argument("audit needs at least one game");
  const game::GameParams params = game::params_from_genome(space, genome);
  const std::uint64_t gi = space.index_of(genome);
  double sum = 0;
  for (int j = 0; j < games; ++j) {
    sum += eval::play_game(params, p1, p2,
                           mix_seed({seed, kAuditStream, gi, static_cast<std::uint64_t>(j)}));
  }
  return sum / games;
}

OptimizeOutput optimize_experiment(const ExperimentConfig& config) {
  config.validate();
  const game::ParamSpace space = config.space();
  const opt::Shape shape = opt::shape_of(space);
  const int trials = config.optimize_trials();

  OptimizeOutput out;
  out.runs.resize(static_cast<std::size_t>(trials));
  out.logs.resize(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), config.jobs, [&](std::size_t i) {
    Rng rng(mix_seed({config.seed, kRunStream, i}));
    eval::GameFitness oracle(space, config.p1, config.p2, config.resamples, config.budget,
                             mix_seed({config.seed, kFitnessStream, i}));
    auto& log = out.logs[i];
    const opt::GenerationObserver observe = [&log](const opt::GenerationRecord& rec) {
      log.push_back(rec);
    };
    if (config.algorithm == Algorithm::kRmhc) {
      out.runs[i] = opt::rmhc_run(shape, oracle, rng, observe);
    } else {
      out.runs[i] = opt::mabrmhc_run(shape, oracle, rng,
                                     {config.delta_mode, config.omega_max}, observe);
    }
  });

  std::size_t generations = std::numeric_limits<std::size_t>::max();
  for (const auto& run : out.runs) {
    generations = std::min(generations, run.recommendation_history.size());
  }

  auto audited = [&](std::size_t g) {
    return config.audit_games > 0 &&
           (g % static_cast<std::size_t>(config.audit_stride) == 0 || g + 1 == generations);
  };

  // Each distinct recommended genome is audited once; the audit depends only
  // on (seed, genome), so sharing it across runs changes no value.
  std::map<std::uint64_t, double> quality;
  for (std::size_t g = 0; g < generations; ++g) {
    if (!audited(g)) continue;
    for (const auto& run : out.runs) {
      quality.emplace(space.index_of(run.recommendation_history[g]), kNaN);
    }
  }
  std::vector<std::uint64_t> to_audit;
  for (const auto& [idx, q] : quality) to_audit.push_back(idx);
  std::vector<double> audit_values(to_audit.size());
  parallel_for(to_audit.size(), config.jobs, [&](std::size_t i) {
    audit_values[i] = audit_quality(space, space.genome_at(to_audit[i]), config.p1, config.p2,
                                    config.audit_games, config.seed);
  });
  for (std::size_t i = 0; i < to_audit.size(); ++i) quality[to_audit[i]] = audit_values[i];

  for (std::size_t g = 0; g < generations; ++g) {
    std::vector<double> best;
    std::vector<double> q;
    for (const auto& run : out.runs) {
      best.push_back(run.fitness_history[g].best_fit_so_far);
      if (audited(g)) q.push_back(quality.at(space.index_of(run.recommendation_history[g])));
    }
    const MeanSe b = mean_and_se(best);
    const MeanSe qs = q.empty() ? MeanSe{kNaN, kNaN} : mean_and_se(q);
    out.curve.push_back({static_cast<int>(g), out.runs.front().fitness_history[g].games_consumed,
                         b.mean, b.se, qs.mean, qs.se});
  }
  if (generations > 0 && config.audit_games > 0) {
    for (const auto& run : out.runs) {
      out.final_quality.push_back(quality.at(space.index_of(run.recommendation_history[generations - 1])));
    }
  }
  return out;
}

ValidationReport validate(const game::ParamSpace& space, const std::vector<Genome>& recommendations,
                          const agents::AgentSpec& p1, const agents::AgentSpec& p2, int games,
                          std::uint64_t seed, int jobs) {
  if (recommendations.empty()) throw std::invalid_argument("no recommendations to validate");
  if (games < 1) throw std::invalid_argument("validation needs at least one game per genome");
  ValidationReport report;
  report.rows.resize(recommendations.size());
  parallel_for(recommendations.size(), jobs, [&](std::size_t i) {
    const game::GameParams params = game::params_from_genome(space, recommendations[i]);
    double sum = 0;
    for (int j = 0; j < games; ++j) {
      sum += eval::play_game(params, p1, p2,
                             mix_seed({seed, kValidateStream, i, static_cast<std::uint64_t>(j)}));
    }
    report.rows[i] = {recommendations[i], 100.0 * sum / games};
  });
  double total = 0;
  for (const auto& r : report.rows) total += r.win_rate_pct;
  report.mean_pct = total / static_cast<double>(report.rows.size());
  return report;
}

BenchResult bench(const game::GameParams& params, long long ticks, game::kernels::Isa isa) {
  const game::kernels::Isa previous = game::kernels::active().isa;
  if (!game::kernels::set_active(isa)) {
    throw std::invalid_argument("kernel variant " + std::string(game::kernels::isa_name(isa)) +
                                " is not available on this CPU");
  }
  using game::Action;
  // Mostly shooting and turning so the missile buffers stay populated.
  constexpr Action kScript[] = {Action::kShoot, Action::kRotateClockwise, Action::kThrust,
                                Action::kShoot, Action::kRotateAnticlockwise, Action::kDoNothing,
                                Action::kShoot};
  constexpr std::size_t kLen = std::size(kScript);
  long long done = 0;
  std::uint64_t game_no = 0;
  std::size_t k = 0;
  const auto t0 = std::chrono::steady_clock::now();
  while (done < ticks) {
    game::GameState s = game::init_state(params, game_no++);
    while (!s.finished() && done < ticks) {
      game::step(s, kScript[k % kLen], kScript[(k + 3) % kLen]);
      ++k;
      ++done;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  game::kernels::set_active(previous);
  return {isa, done, secs, secs > 0 ? static_cast<double>(done) / secs : 0};
}

Genome parse_genome(const std::string& text) {
  Genome g;
  std::string cur;
  for (char ch : text) {
    if (ch == '(' || ch == ')' || ch == ' ') continue;
    if (ch == ',') {
      if (cur.empty()) throw std::invalid_argument("malformed genome '" + text + "'");
      g.push_back(std::stoi(cur));
      cur.clear();
    } else if (ch >= '0' && ch <= '9') {
      cur += ch;
    } else {
      throw std::invalid_argument("malformed genome '" + text + "'");
    }
  }
  if (cur.empty()) throw std::invalid_argument("malformed genome '" + text + "'");
  g.push_back(std::stoi(cur));
  return g;
}

}  // namespace skilldepth::harness
