#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "skilldepth/eval/evaluation.hpp"
#include "skilldepth/game/params.hpp"
#include "skilldepth/rng.hpp"

namespace skilldepth::opt {

using eval::NoisyFitness;

// Number of legal values per dimension. The optimizers only need this much
// of a search space; shape_of() adapts a game ParamSpace.
using Shape = std::vector<int>;

Shape shape_of(const game::ParamSpace& space);
// Throws std::invalid_argument if any dimension has fewer than two values.
void check_shape(const Shape& shape);
bool contains(const Shape& shape, const Genome& g);
Genome random_genome(const Shape& shape, Rng& rng);

// Uniform dimension, then a uniform value over all of that dimension's values
// (the current one included).
Genome mutate_one_gene(const Genome& x, const Shape& shape, Rng& rng);

// Incumbent of a resampling hill climber. best_fit_so_far is the mean of the
// m fitness samples seen for `genome` since it was last accepted.
struct Incumbent {
  Genome genome;
  double best_fit_so_far = 0;
  std::int64_t m = 0;
};

struct Verdict {
  double average_fitness;
  double delta;  // fit_y - average_fitness
  bool accepted;
};

// One selection step shared by both climbers: fold fit_x into the incumbent's
// running mean, then replace the incumbent by the offspring iff
// fit_y >= that mean.
Verdict resolve_generation(Incumbent& inc, const Genome& offspring, double fit_x, double fit_y);

// How Delta_d(k) summarises observed fitness changes.
enum class DeltaMode : std::uint8_t { kSignedMax, kAbsMax };

struct ArmStats {
  std::int64_t count = 0;
  double max_delta = 0;
  double sum_delta = 0;
  double mean_delta = 0;  // sum_delta / count
};

class BanditStats {
 public:
  explicit BanditStats(const Shape& shape);

  std::size_t dims() const { return arms_.size(); }
  int arms(std::size_t d) const { return static_cast<int>(arms_[d].size()); }
  std::int64_t dim_count(std::size_t d) const { return dim_count_[d]; }
  const ArmStats& arm(std::size_t d, int k) const { return arms_[d][static_cast<std::size_t>(k)]; }

  // The first observation of an arm replaces its zero initial values.
  void record(std::size_t d, int k, double delta, DeltaMode mode);

 private:
  std::vector<std::int64_t> dim_count_;
  std::vector<std::vector<ArmStats>> arms_;
};

// Source of the tie-breaking noise omega, one draw per formula term.
using TieBreak = std::function<double()>;

// min_j (Delta_d(j) + sqrt(2 ln(sum_k N_d(k)) / N_d) + omega_j), natural log;
// +infinity while the dimension has never been selected.
double urgency(std::size_t d, const BanditStats& stats, const TieBreak& omega);

// argmax_k (mean Delta_d(k) + sqrt(2 ln N_d / N_d(k)) + omega_k). Arms never
// tried rank above all tried ones; ties among them go to the largest omega.
int select_arm(std::size_t d, const BanditStats& stats, const TieBreak& omega);

struct DimensionChoice {
  std::size_t dim;
  std::vector<double> urgencies;
};

// argmax_d urgency(d), ties among never-selected dimensions broken by omega.
DimensionChoice select_dimension(const BanditStats& stats, const TieBreak& omega);

struct GenerationRecord {
  int generation = 0;
  std::int64_t games_consumed = 0;
  Genome parent;
  Genome offspring;
  double fit_x = 0;
  double fit_y = 0;
  double average_fitness = 0;
  bool accepted = false;
  double best_fit_so_far = 0;
  std::int64_t m = 0;
  // MABRMHC only; -1 / empty for RMHC.
  int mutated_dim = -1;
  int chosen_arm = -1;
  std::vector<double> urgencies;
};

struct HistoryPoint {
  std::int64_t games_consumed;
  double best_fit_so_far;
};

struct OptResult {
  Genome recommendation;
  std::vector<HistoryPoint> fitness_history;
  std::vector<Genome> recommendation_history;

  int generations() const { return static_cast<int>(recommendation_history.size()); }
};

using GenerationObserver = std::function<void(const GenerationRecord&)>;

// Both climbers stop before a generation the ledger cannot pay for in full
// (2r games), or when the oracle refuses a call. Throws std::invalid_argument
// if the budget cannot cover even one generation.
OptResult rmhc_run(const Shape& shape, NoisyFitness& oracle, Rng& rng,
                   const GenerationObserver& observe = {});

struct MabOptions {
  DeltaMode delta_mode = DeltaMode::kSignedMax;
  double omega_max = 1e-6;
};

OptResult mabrmhc_run(const Shape& shape, NoisyFitness& oracle, Rng& rng,
                      const MabOptions& options = {}, const GenerationObserver& observe = {});

// Fraction of ones over a binary genome, optionally with additive Gaussian
// noise per sample, averaged over r samples per call.
class OneMaxFitness final : public NoisyFitness {
 public:
  OneMaxFitness(int dims, int resamples, std::int64_t budget, double noise_sd, std::uint64_t seed);

  std::optional<double> evaluate(const Genome& genome) override;
  int resamples() const override { return r_; }
  const eval::BudgetLedger& ledger() const override { return ledger_; }

  Shape shape() const { return Shape(static_cast<std::size_t>(dims_), 2); }
  static double true_value(const Genome& genome);

 private:
  int dims_;
  int r_;
  eval::BudgetLedger ledger_;
  double noise_sd_;
  Rng rng_;
};

}  // namespace skilldepth::opt
