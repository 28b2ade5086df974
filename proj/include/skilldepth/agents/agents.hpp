#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "skilldepth/game/engine.hpp"
#include "skilldepth/rng.hpp"

namespace skilldepth::agents {

using game::Action;
using game::GameState;
using game::Player;

enum class AgentKind : std::uint8_t { kRas, kRandom, kOlmcts };

struct AgentSpec {
  AgentKind kind = AgentKind::kRas;
  int iterations = 350;
  int rollout_depth = 10;
  double ucb_constant = std::numbers::sqrt2;
  std::uint64_t seed = 0;

  bool operator==(const AgentSpec&) const = default;
};

// "ras", "random", "olmcts" or "olmcts:<iterations>". Throws
// std::invalid_argument on anything else.
AgentSpec parse_agent_spec(std::string_view text);
std::string to_string(const AgentSpec& spec);

class Agent {
 public:
  virtual ~Agent() = default;
  virtual Action act(const GameState& state, Player me) = 0;
};

// `seed` is mixed with spec.seed so that one spec can drive many games.
std::unique_ptr<Agent> make_agent(const AgentSpec& spec, std::uint64_t seed);

// Shoot whenever the cooldown allows, otherwise rotate clockwise.
Action ras_act(const GameState& state, Player me);

Action random_act(Rng& rng);

// Bookkeeping of one search, for tests and diagnostics.
struct SearchStats {
  long long forward_steps = 0;
  int max_tree_depth = 0;
  std::array<int, game::kNumActions> root_visits{};
  std::array<double, game::kNumActions> root_mean_value{};
};

// Open-loop MCTS. The tree is keyed by own-action prefixes and every
// iteration replays its prefix from a copy of the root state; the opponent
// moves uniformly at random both in the tree and in rollouts.
class OpenLoopSearch {
 public:
  explicit OpenLoopSearch(const AgentSpec& spec);

  // Throws std::invalid_argument for a non-positive iteration budget.
  Action decide(const GameState& root, Player me, Rng& rng, SearchStats* stats = nullptr);

 private:
  struct Node {
    std::array<int, game::kNumActions> child;
    int expanded = 0;
    int visits = 0;
    double total = 0;
  };

  int select_child(const Node& node) const;
  double normalise(double value) const;

  AgentSpec spec_;
  std::vector<Node> nodes_;
  std::vector<int> path_;
  double lo_ = 0;
  double hi_ = 0;
};

Action olmcts_act(const GameState& state, Player me, const AgentSpec& spec, Rng& rng,
                  SearchStats* stats = nullptr);

}  // namespace skilldepth::agents
