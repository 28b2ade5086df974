#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "skilldepth/agents/agents.hpp"
#include "skilldepth/game/engine.hpp"
#include "skilldepth/game/params.hpp"
#include "skilldepth/game/trace.hpp"

namespace skilldepth::eval {

using agents::AgentSpec;
using game::GameParams;
using game::ParamSpace;

// 1 if player 1 wins, 0 if player 2 wins, 0.5 on a draw.
using GameValue = double;

GameValue game_value(game::Winner w);

// Everything random in one match. Swapping both pairs mirrors the match.
struct MatchSeeds {
  std::array<std::uint64_t, 2> recoil;
  std::array<std::uint64_t, 2> agent;

  MatchSeeds mirrored() const { return {{recoil[1], recoil[0]}, {agent[1], agent[0]}}; }
};

MatchSeeds match_seeds(std::uint64_t seed);

struct MatchResult {
  GameValue value;
  game::GameOutcome outcome;
};

// Plays all 500 ticks. Throws std::invalid_argument if an agent returns an
// action outside the enumeration.
MatchResult play_match(const GameParams& params, agents::Agent& p1, agents::Agent& p2,
                       std::array<std::uint64_t, 2> recoil_seeds,
                       game::TraceWriter* trace = nullptr);
MatchResult play_match(const GameParams& params, const AgentSpec& p1, const AgentSpec& p2,
                       const MatchSeeds& seeds, game::TraceWriter* trace = nullptr);

GameValue play_game(const GameParams& params, const AgentSpec& p1, const AgentSpec& p2,
                    std::uint64_t seed);

// Games consumed against a cap.
class BudgetLedger {
 public:
  explicit BudgetLedger(std::int64_t allowed);

  std::int64_t played() const { return played_; }
  std::int64_t allowed() const { return allowed_; }
  std::int64_t remaining() const { return allowed_ - played_; }
  bool can_afford(std::int64_t games) const { return games <= remaining(); }
  // Throws std::logic_error if the charge would exceed the cap.
  void charge(std::int64_t games);

 private:
  std::int64_t played_ = 0;
  std::int64_t allowed_;
};

struct FitnessReport {
  Genome genome;
  int resamples = 0;
  double value = 0;
  std::int64_t games_consumed = 0;
};

double mean_game_value(std::span<const GameValue> values);

// Seed of resample `i` within fitness call `call_index` of a run.
std::uint64_t resample_seed(std::uint64_t run_seed, std::uint64_t call_index,
                            std::uint64_t genome_index, int i);

// Mean GameValue over r games, or nullopt (nothing played or charged) when
// the ledger cannot afford r more games. The r games may run on `jobs`
// threads; the result does not depend on it.
std::optional<FitnessReport> fitness(const ParamSpace& space, const Genome& genome, int r,
                                     const AgentSpec& p1, const AgentSpec& p2,
                                     BudgetLedger& ledger, std::uint64_t run_seed,
                                     std::uint64_t call_index, int jobs = 1);

// The oracle interface the optimizers consume.
class NoisyFitness {
 public:
  virtual ~NoisyFitness() = default;
  // nullopt is the stop signal: the budget refuses another call.
  virtual std::optional<double> evaluate(const Genome& genome) = 0;
  virtual int resamples() const = 0;
  virtual const BudgetLedger& ledger() const = 0;
};

// Win rate of p1 against p2 on the game encoded by a genome.
class GameFitness final : public NoisyFitness {
 public:
  GameFitness(const ParamSpace& space, AgentSpec p1, AgentSpec p2, int resamples,
              std::int64_t budget, std::uint64_t run_seed, int jobs = 1);

  std::optional<double> evaluate(const Genome& genome) override;
  int resamples() const override { return r_; }
  const BudgetLedger& ledger() const override { return ledger_; }
  std::uint64_t calls() const { return calls_; }

 private:
  const ParamSpace& space_;
  AgentSpec p1_;
  AgentSpec p2_;
  int r_;
  BudgetLedger ledger_;
  std::uint64_t run_seed_;
  std::uint64_t calls_ = 0;
  int jobs_;
};

}  // namespace skilldepth::eval
