#include "skilldepth/opt/optimizers.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace skilldepth::opt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lexicographic argmax over (primary, secondary); the secondary key only
// matters between equal primaries, which in practice means +inf.
struct Best {
  int index = -1;
  double primary = -kInf;
  double secondary = -kInf;

  void offer(int i, double p, double s) {
    if (index < 0 || p > primary || (p == primary && s > secondary)) {
      index = i;
      primary = p;
      secondary = s;
    }
  }
};

void require_generation_budget(const NoisyFitness& oracle) {
  const std::int64_t need = 2LL * oracle.resamples();
  if (oracle.ledger().remaining() < need) {
    throw std::invalid_argument("budget of " + std::to_string(oracle.ledger().remaining()) +
                                " games cannot pay for one generation (" + std::to_string(need) +
                                ")");
  }
}

void log_generation(OptResult& result, const Incumbent& inc, const NoisyFitness& oracle) {
  result.fitness_history.push_back({oracle.ledger().played(), inc.best_fit_so_far});
  result.recommendation_history.push_back(inc.genome);
  result.recommendation = inc.genome;
}

}  // namespace

Shape shape_of(const game::ParamSpace& space) {
  Shape s(space.size());
  for (std::size_t d = 0; d < s.size(); ++d) s[d] = space.arity(d);
  return s;
}

void check_shape(const Shape& shape) {
  if (shape.empty()) throw std::invalid_argument("empty genome shape");
  for (int a : shape) {
    if (a < 2) throw std::invalid_argument("every dimension needs at least two values");
  }
}

bool contains(const Shape& shape, const Genome& g) {
  if (g.size() != shape.size()) return false;
  for (std::size_t d = 0; d < g.size(); ++d) {
    if (g[d] < 0 || g[d] >= shape[d]) return false;
  }
  return true;
}

Genome random_genome(const Shape& shape, Rng& rng) {
  Genome g(shape.size());
  for (std::size_t d = 0; d < g.size(); ++d) {
    g[d] = static_cast<int>(rng.below(static_cast<std::uint32_t>(shape[d])));
  }
  return g;
}

Genome mutate_one_gene(const Genome& x, const Shape& shape, Rng& rng) {
  if (x.empty()) throw std::invalid_argument("cannot mutate an empty genome");
  Genome y = x;
  const std::size_t d = rng.below(static_cast<std::uint32_t>(x.size()));
  y[d] = static_cast<int>(rng.below(static_cast<std::uint32_t>(shape[d])));
  return y;
}

Verdict resolve_generation(Incumbent& inc, const Genome& offspring, double fit_x, double fit_y) {
  const double m = static_cast<double>(inc.m);
  const double average = (inc.best_fit_so_far * m + fit_x) / (m + 1);
  const double delta = fit_y - average;
  if (delta >= 0) {
    inc.genome = offspring;
    inc.best_fit_so_far = fit_y;
    inc.m = 1;
    return {average, delta, true};
  }
  inc.best_fit_so_far = average;
  inc.m += 1;
  return {average, delta, false};
}

BanditStats::BanditStats(const Shape& shape) : dim_count_(shape.size(), 0) {
  check_shape(shape);
  arms_.reserve(shape.size());
  for (int a : shape) arms_.emplace_back(static_cast<std::size_t>(a));
}

void BanditStats::record(std::size_t d, int k, double delta, DeltaMode mode) {
  ArmStats& a = arms_.at(d).at(static_cast<std::size_t>(k));
  const double tracked = mode == DeltaMode::kAbsMax ? std::abs(delta) : delta;
  if (a.count == 0) {
    a.max_delta = tracked;
    a.sum_delta = delta;
  } else {
    a.max_delta = std::max(a.max_delta, tracked);
    a.sum_delta += delta;
  }
  a.count += 1;
  a.mean_delta = a.sum_delta / static_cast<double>(a.count);
  dim_count_[d] += 1;
}

double urgency(std::size_t d, const BanditStats& stats, const TieBreak& omega) {
  const std::int64_t n_d = stats.dim_count(d);
  if (n_d == 0) return kInf;
  std::int64_t total = 0;
  for (int k = 0; k < stats.arms(d); ++k) total += stats.arm(d, k).count;
  const double explore =
      std::sqrt(2.0 * std::log(static_cast<double>(total)) / static_cast<double>(n_d));
  double lowest = kInf;
  for (int j = 0; j < stats.arms(d); ++j) {
    lowest = std::min(lowest, stats.arm(d, j).max_delta + explore + omega());
  }
  return lowest;
}

int select_arm(std::size_t d, const BanditStats& stats, const TieBreak& omega) {
  const double log_n = std::log(static_cast<double>(stats.dim_count(d)));
  Best best;
  for (int k = 0; k < stats.arms(d); ++k) {
    const ArmStats& a = stats.arm(d, k);
    if (a.count == 0) {
      best.offer(k, kInf, omega());
    } else {
      const double ucb =
          a.mean_delta + std::sqrt(2.0 * log_n / static_cast<double>(a.count)) + omega();
      best.offer(k, ucb, 0);
    }
  }
  return best.index;
}

DimensionChoice select_dimension(const BanditStats& stats, const TieBreak& omega) {
  DimensionChoice choice{0, std::vector<double>(stats.dims())};
  Best best;
  for (std::size_t d = 0; d < stats.dims(); ++d) {
    const double u = urgency(d, stats, omega);
    choice.urgencies[d] = u;
    best.offer(static_cast<int>(d), u, std::isinf(u) ? omega() : 0);
  }
  choice.dim = static_cast<std::size_t>(best.index);
  return choice;
}

OptResult rmhc_run(const Shape& shape, NoisyFitness& oracle, Rng& rng,
                   const GenerationObserver& observe) {
  check_shape(shape);
  require_generation_budget(oracle);
  const std::int64_t per_generation = 2LL * oracle.resamples();

  OptResult result;
  Incumbent inc{random_genome(shape, rng), 0, 0};
  result.recommendation = inc.genome;
  for (int gen = 0; oracle.ledger().can_afford(per_generation); ++gen) {
    const Genome y = mutate_one_gene(inc.genome, shape, rng);
    const auto fit_x = oracle.evaluate(inc.genome);
    if (!fit_x) break;
    const auto fit_y = oracle.evaluate(y);
    if (!fit_y) break;
    const Genome parent = inc.genome;
    const Verdict v = resolve_generation(inc, y, *fit_x, *fit_y);
    log_generation(result, inc, oracle);
    if (observe) {
      GenerationRecord rec;
      rec.generation = gen;
      rec.games_consumed = oracle.ledger().played();
      rec.parent = parent;
      rec.offspring = y;
      rec.fit_x = *fit_x;
      rec.fit_y = *fit_y;
      rec.average_fitness = v.average_fitness;
      rec.accepted = v.accepted;
      rec.best_fit_so_far = inc.best_fit_so_far;
      rec.m = inc.m;
      observe(rec);
    }
  }
  return result;
}

OptResult mabrmhc_run(const Shape& shape, NoisyFitness& oracle, Rng& rng,
                      const MabOptions& options, const GenerationObserver& observe) {
  check_shape(shape);
  require_generation_budget(oracle);
  const std::int64_t per_generation = 2LL * oracle.resamples();

  BanditStats stats(shape);
  const TieBreak omega = [&rng, max = options.omega_max] { return rng.uniform() * max; };

  OptResult result;
  Incumbent inc{random_genome(shape, rng), 0, 0};
  result.recommendation = inc.genome;
  for (int gen = 0; oracle.ledger().can_afford(per_generation); ++gen) {
    DimensionChoice choice = select_dimension(stats, omega);
    const std::size_t d = choice.dim;
    const int k = select_arm(d, stats, omega);
    Genome y = inc.genome;
    y[d] = k;
    const auto fit_x = oracle.evaluate(inc.genome);
    if (!fit_x) break;
    const auto fit_y = oracle.evaluate(y);
    if (!fit_y) break;
    const Genome parent = inc.genome;
    const Verdict v = resolve_generation(inc, y, *fit_x, *fit_y);
    stats.record(d, k, v.delta, options.delta_mode);
    log_generation(result, inc, oracle);
    if (observe) {
      GenerationRecord rec;
      rec.generation = gen;
      rec.games_consumed = oracle.ledger().played();
      rec.parent = parent;
      rec.offspring = std::move(y);
      rec.fit_x = *fit_x;
      rec.fit_y = *fit_y;
      rec.average_fitness = v.average_fitness;
      rec.accepted = v.accepted;
      rec.best_fit_so_far = inc.best_fit_so_far;
      rec.m = inc.m;
      rec.mutated_dim = static_cast<int>(d);
      rec.chosen_arm = k;
      rec.urgencies = std::move(choice.urgencies);
      observe(rec);
    }
  }
  return result;
}

OneMaxFitness::OneMaxFitness(int dims, int resamples, std::int64_t budget, double noise_sd,
                             std::uint64_t seed)
    : dims_(dims), r_(resamples), ledger_(budget), noise_sd_(noise_sd), rng_(seed) {
  if (dims < 1 || resamples < 1) throw std::invalid_argument("bad OneMax configuration");
}

double OneMaxFitness::true_value(const Genome& genome) {
  int ones = 0;
  for (int v : genome) ones += v;
  return static_cast<double>(ones) / static_cast<double>(genome.size());
}

std::optional<double> OneMaxFitness::evaluate(const Genome& genome) {
  if (!ledger_.can_afford(r_)) return std::nullopt;
  ledger_.charge(r_);
  const double f = true_value(genome);
  if (noise_sd_ == 0) return f;
  std::normal_distribution<double> noise(0.0, noise_sd_);
  double sum = 0;
  for (int i = 0; i < r_; ++i) sum += f + noise(rng_);
  return sum / r_;
}

}  // namespace skilldepth::opt
