#pragma once

#include <array>
#include <cstdint>
#include <numbers>

#include "skilldepth/game/params.hpp"
#include "skilldepth/rng.hpp"

namespace skilldepth::game {

inline constexpr double kArenaWidth = 640;
inline constexpr double kArenaHeight = 480;
inline constexpr int kGameTicks = 500;
inline constexpr int kMissileLifetime = 30;
inline constexpr double kMissileRadius = 4;
inline constexpr double kHitReward = 100;
inline constexpr double kFriction = 0.99;
// Headings are quantized to kHeadingSteps directions, pi/16 rad apart.
inline constexpr int kHeadingSteps = 32;
inline constexpr double kRotationStep = 2 * std::numbers::pi / kHeadingSteps;

enum class Action : std::uint8_t {
  kDoNothing,
  kRotateClockwise,
  kRotateAnticlockwise,
  kThrust,
  kShoot,
};
inline constexpr int kNumActions = 5;

const char* action_name(Action a);
inline bool is_valid(Action a) { return static_cast<int>(a) < kNumActions; }

enum class Player : std::uint8_t { kOne = 0, kTwo = 1 };

inline constexpr int index(Player p) { return static_cast<int>(p); }
inline constexpr Player opponent(Player p) { return p == Player::kOne ? Player::kTwo : Player::kOne; }

struct Vec2 {
  double x = 0;
  double y = 0;
  bool operator==(const Vec2&) const = default;
};

struct Ship {
  // Offset from the arena center. Keeping the origin at the center makes the
  // 180-degree rotation of the arena an exact negation.
  Vec2 pos;
  Vec2 vel;
  int heading = 0;  // in units of kRotationStep, [0, kHeadingSteps)
  int cooldown = 0;
  int missiles_fired = 0;
  int hits = 0;
  // Maintained incrementally; always equals score() recomputed from counters.
  double running_score = 0;

  Vec2 screen_position() const { return {pos.x + kArenaWidth / 2, pos.y + kArenaHeight / 2}; }
  double heading_radians() const { return heading * kRotationStep; }

  bool operator==(const Ship&) const = default;
};

// Structure-of-arrays missile store; see kernels.hpp.
struct MissileBuffer {
  // Each player has at most kMissileLifetime + 1 missiles alive mid-step.
  static constexpr int kCapacity = 64;

  alignas(32) std::array<double, kCapacity> x;
  alignas(32) std::array<double, kCapacity> y;
  alignas(32) std::array<double, kCapacity> vx;
  alignas(32) std::array<double, kCapacity> vy;
  std::array<int, kCapacity> age;
  std::array<std::uint8_t, kCapacity> owner;
  int count = 0;

  // Compares live entries only.
  bool operator==(const MissileBuffer& o) const;
};

struct GameState {
  GameParams params;
  std::array<Ship, 2> ships;
  MissileBuffer missiles;
  int tick = 0;
  // One recoil stream per ship: a mirrored match replays exactly when the
  // streams are swapped along with the players.
  std::array<Rng, 2> recoil_rng;

  const Ship& ship(Player p) const { return ships[index(p)]; }
  Ship& ship(Player p) { return ships[index(p)]; }
  bool finished() const { return tick >= kGameTicks; }

  bool operator==(const GameState&) const = default;
};

enum class Winner : std::uint8_t { kP1, kP2, kDraw };

struct GameOutcome {
  Winner winner;
  std::array<double, 2> scores;
};

GameState init_state(const GameParams& params, std::uint64_t seed);
GameState init_state(const GameParams& params, std::array<std::uint64_t, 2> recoil_seeds);

// Advances one tick with simultaneous actions. Throws std::logic_error on a
// finished game and std::invalid_argument on an action outside the enum.
void step(GameState& state, Action a1, Action a2);

// 100 * hits - c * launches
double score(const GameState& state, Player p);
double score(const GameParams& params, const Ship& ship);

// Throws std::logic_error before the final tick.
GameOutcome outcome(const GameState& state);

// Unit vector for a quantized heading. dir(h + 16) == -dir(h) exactly.
Vec2 heading_vector(int heading);

}  // namespace skilldepth::game
