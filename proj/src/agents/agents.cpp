#include "skilldepth/agents/agents.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace skilldepth::agents {

namespace {

void step_as(GameState& s, Player me, Action mine, Action theirs) {
  if (me == Player::kOne) {
    game::step(s, mine, theirs);
  } else {
    game::step(s, theirs, mine);
  }
}

class RasAgent final : public Agent {
 public:
  Action act(const GameState& state, Player me) override { return ras_act(state, me); }
};

class RandomAgent final : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : rng_(seed) {}
  Action act(const GameState&, Player) override { return random_act(rng_); }

 private:
  Rng rng_;
};

class OlmctsAgent final : public Agent {
 public:
  OlmctsAgent(const AgentSpec& spec, std::uint64_t seed) : search_(spec), rng_(seed) {}
  Action act(const GameState& state, Player me) override {
    return search_.decide(state, me, rng_);
  }

 private:
  OpenLoopSearch search_;
  Rng rng_;
};

}  // namespace

AgentSpec parse_agent_spec(std::string_view text) {
  AgentSpec spec;
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  if (kind == "ras") {
    spec.kind = AgentKind::kRas;
  } else if (kind == "random") {
    spec.kind = AgentKind::kRandom;
  } else if (kind == "olmcts") {
    spec.kind = AgentKind::kOlmcts;
  } else {
    throw std::invalid_argument("unknown agent '" + std::string(text) + "'");
  }
  if (colon != std::string_view::npos) {
    if (spec.kind != AgentKind::kOlmcts) {
      throw std::invalid_argument("only olmcts takes an iteration budget: '" +
                                  std::string(text) + "'");
    }
    const std::string_view digits = text.substr(colon + 1);
    int n = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || n <= 0) {
      throw std::invalid_argument("bad iteration budget in '" + std::string(text) + "'");
    }
    spec.iterations = n;
  }
  return spec;
}

std::string to_string(const AgentSpec& spec) {
  switch (spec.kind) {
    case AgentKind::kRas: return "ras";
    case AgentKind::kRandom: return "random";
    case AgentKind::kOlmcts: return "olmcts:" + std::to_string(spec.iterations);
  }
  return "?";
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, std::uint64_t seed) {
  const std::uint64_t s = mix_seed({spec.seed, seed});
  switch (spec.kind) {
    case AgentKind::kRas: return std::make_unique<RasAgent>();
    case AgentKind::kRandom: return std::make_unique<RandomAgent>(s);
    case AgentKind::kOlmcts: return std::make_unique<OlmctsAgent>(spec, s);
  }
  throw std::invalid_argument("unknown agent kind");
}

Action ras_act(const GameState& state, Player me) {
  return state.ship(me).cooldown == 0 ? Action::kShoot : Action::kRotateClockwise;
}

Action random_act(Rng& rng) { return static_cast<Action>(rng.below(game::kNumActions)); }

OpenLoopSearch::OpenLoopSearch(const AgentSpec& spec) : spec_(spec) {
  if (spec_.rollout_depth < 1) throw std::invalid_argument("rollout depth must be >= 1");
}

double OpenLoopSearch::normalise(double value) const {
  if (hi_ > lo_) return (value - lo_) / (hi_ - lo_);
  return 0;
}

int OpenLoopSearch::select_child(const Node& node) const {
  const double log_parent = std::log(static_cast<double>(node.visits));
  int best = 0;
  double best_ucb = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < game::kNumActions; ++a) {
    const Node& c = nodes_[static_cast<std::size_t>(node.child[a])];
    const double mean = c.total / c.visits;
    const double ucb = normalise(mean) + spec_.ucb_constant * std::sqrt(log_parent / c.visits);
    if (ucb > best_ucb) {
      best_ucb = ucb;
      best = a;
    }
  }
  return best;
}

Action OpenLoopSearch::decide(const GameState& root, Player me, Rng& rng, SearchStats* stats) {
  if (spec_.iterations <= 0) throw std::invalid_argument("OLMCTS needs at least one iteration");
  if (root.finished()) throw std::logic_error("search requested on a finished game");

  nodes_.clear();
  nodes_.reserve(static_cast<std::size_t>(spec_.iterations) + 1);
  Node blank;
  blank.child.fill(-1);
  nodes_.push_back(blank);
  lo_ = std::numeric_limits<double>::infinity();
  hi_ = -std::numeric_limits<double>::infinity();
  const Player them = game::opponent(me);
  long long steps = 0;
  int max_depth = 0;

  for (int it = 0; it < spec_.iterations; ++it) {
    GameState sim = root;
    path_.clear();
    path_.push_back(0);
    int node = 0;
    int depth = 0;
    while (!sim.finished()) {
      int action;
      bool fresh = false;
      if (nodes_[node].expanded < game::kNumActions) {
        int untried[game::kNumActions];
        int n = 0;
        for (int a = 0; a < game::kNumActions; ++a) {
          if (nodes_[node].child[a] < 0) untried[n++] = a;
        }
        action = untried[rng.below(static_cast<std::uint32_t>(n))];
        const int created = static_cast<int>(nodes_.size());
        nodes_.push_back(blank);
        nodes_[node].child[action] = created;
        nodes_[node].expanded += 1;
        fresh = true;
      } else {
        action = select_child(nodes_[node]);
      }
      step_as(sim, me, static_cast<Action>(action), random_act(rng));
      ++steps;
      ++depth;
      node = nodes_[node].child[action];
      path_.push_back(node);
      if (fresh) break;
    }
    max_depth = std::max(max_depth, depth);

    for (int i = 0; i < spec_.rollout_depth && !sim.finished(); ++i) {
      step_as(sim, me, random_act(rng), random_act(rng));
      ++steps;
    }

    const double value = game::score(sim, me) - game::score(sim, them);
    lo_ = std::min(lo_, value);
    hi_ = std::max(hi_, value);
    for (int idx : path_) {
      nodes_[idx].visits += 1;
      nodes_[idx].total += value;
    }
  }

  const Node& r = nodes_[0];
  int best = 0;
  int best_visits = -1;
  for (int a = 0; a < game::kNumActions; ++a) {
    const int v = r.child[a] < 0 ? 0 : nodes_[r.child[a]].visits;
    if (v > best_visits) {
      best_visits = v;
      best = a;
    }
  }

  if (stats != nullptr) {
    stats->forward_steps = steps;
    stats->max_tree_depth = max_depth;
    for (int a = 0; a < game::kNumActions; ++a) {
      if (r.child[a] < 0) {
        stats->root_visits[a] = 0;
        stats->root_mean_value[a] = 0;
      } else {
        const Node& c = nodes_[r.child[a]];
        stats->root_visits[a] = c.visits;
        stats->root_mean_value[a] = c.total / c.visits;
      }
    }
  }
  return static_cast<Action>(best);
}

Action olmcts_act(const GameState& state, Player me, const AgentSpec& spec, Rng& rng,
                  SearchStats* stats) {
  if (spec.kind != AgentKind::kOlmcts) throw std::invalid_argument("spec is not an OLMCTS agent");
  OpenLoopSearch search(spec);
  return search.decide(state, me, rng, stats);
}

}  // namespace skilldepth::agents
