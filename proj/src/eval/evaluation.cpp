#include "skilldepth/eval/evaluation.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "skilldepth/parallel.hpp"

namespace skilldepth::eval {

GameValue game_value(game::Winner w) {
  switch (w) {
    case game::Winner::kP1: return 1.0;
    case game::Winner::kP2: return 0.0;
    case game::Winner::kDraw: return 0.5;
  }
  return 0.5;
}

MatchSeeds match_seeds(std::uint64_t seed) {
  return {{mix_seed({seed, 1}), mix_seed({seed, 2})},
          {mix_seed({seed, 11}), mix_seed({seed, 12})}};
}

MatchResult play_match(const GameParams& params, agents::Agent& p1, agents::Agent& p2,
                       std::array<std::uint64_t, 2> recoil_seeds, game::TraceWriter* trace) {
  game::GameState state = game::init_state(params, recoil_seeds);
  while (!state.finished()) {
    const game::Action a1 = p1.act(state, game::Player::kOne);
    const game::Action a2 = p2.act(state, game::Player::kTwo);
    if (!game::is_valid(a1) || !game::is_valid(a2)) {
      throw std::invalid_argument("agent returned action " +
                                  std::to_string(static_cast<int>(game::is_valid(a1) ? a2 : a1)) +
                                  " at tick " + std::to_string(state.tick));
    }
    game::step(state, a1, a2);
    if (trace != nullptr) trace->record(state, a1, a2);
  }
  const game::GameOutcome out = game::outcome(state);
  return {game_value(out.winner), out};
}

MatchResult play_match(const GameParams& params, const AgentSpec& p1, const AgentSpec& p2,
                       const MatchSeeds& seeds, game::TraceWriter* trace) {
  auto a1 = agents::make_agent(p1, seeds.agent[0]);
  auto a2 = agents::make_agent(p2, seeds.agent[1]);
  return play_match(params, *a1, *a2, seeds.recoil, trace);
}

GameValue play_game(const GameParams& params, const AgentSpec& p1, const AgentSpec& p2,
                    std::uint64_t seed) {
  return play_match(params, p1, p2, match_seeds(seed)).value;
}

BudgetLedger::BudgetLedger(std::int64_t allowed) : allowed_(allowed) {
  if (allowed < 0) throw std::invalid_argument("negative game budget");
}

void BudgetLedger::charge(std::int64_t games) {
  if (!can_afford(games)) {
    throw std::logic_error("budget exceeded: " + std::to_string(played_) + " + " +
                           std::to_string(games) + " > " + std::to_string(allowed_));
  }
  played_ += games;
}

double mean_game_value(std::span<const GameValue> values) {
  if (values.empty()) throw std::invalid_argument("mean of zero games");
  double sum = 0;
  for (GameValue v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::uint64_t resample_seed(std::uint64_t run_seed, std::uint64_t call_index,
                            std::uint64_t genome_index, int i) {
  return mix_seed({run_seed, call_index, genome_index, static_cast<std::uint64_t>(i)});
}

std::optional<FitnessReport> fitness(const ParamSpace& space, const Genome& genome, int r,
                                     const AgentSpec& p1, const AgentSpec& p2,
                                     BudgetLedger& ledger, std::uint64_t run_seed,
                                     std::uint64_t call_index, int jobs) {
  if (r < 1) throw std::invalid_argument("resample count must be >= 1");
  if (!ledger.can_afford(r)) return std::nullopt;
  const GameParams params = game::params_from_genome(space, genome);
  const std::uint64_t gi = space.index_of(genome);
  std::vector<GameValue> values(static_cast<std::size_t>(r));
  parallel_for(values.size(), jobs, [&](std::size_t i) {
    values[i] = play_game(params, p1, p2, resample_seed(run_seed, call_index, gi, static_cast<int>(i)));
  });
  ledger.charge(r);
  return FitnessReport{genome, r, mean_game_value(values), r};
}

GameFitness::GameFitness(const ParamSpace& space, AgentSpec p1, AgentSpec p2, int resamples,
                         std::int64_t budget, std::uint64_t run_seed, int jobs)
    : space_(space),
      p1_(p1),
      p2_(p2),
      r_(resamples),
      ledger_(budget),
      run_seed_(run_seed),
      jobs_(jobs) {
  if (resamples < 1) throw std::invalid_argument("resample count must be >= 1");
}

std::optional<double> GameFitness::evaluate(const Genome& genome) {
  auto report = fitness(space_, genome, r_, p1_, p2_, ledger_, run_seed_, calls_, jobs_);
  if (!report) return std::nullopt;
  ++calls_;
  return report->value;
}

}  // namespace skilldepth::eval
