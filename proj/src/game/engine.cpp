#include "skilldepth/game/engine.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "skilldepth/game/kernels.hpp"

namespace skilldepth::game {

namespace {

using HeadingTable = std::array<Vec2, kHeadingSteps>;

HeadingTable make_heading_table() {
  HeadingTable t{};
  constexpr int half = kHeadingSteps / 2;
  for (int h = 0; h < half; ++h) {
    const double a = h * kRotationStep;
    t[h] = {std::cos(a), std::sin(a)};
    t[h + half] = {-t[h].x, -t[h].y};
  }
  // exact axes
  t[0] = {1, 0};
  t[half] = {-1, -0.0};
  t[half / 2] = {0, 1};
  t[half / 2 + half] = {-0.0, -1};
  return t;
}

const HeadingTable kHeadings = make_heading_table();

void clamp_speed(Vec2& v, double max_speed) {
  const double sq = v.x * v.x + v.y * v.y;
  if (sq > max_speed * max_speed) {
    const double scale = max_speed / std::sqrt(sq);
    v.x *= scale;
    v.y *= scale;
  }
}

void apply_action(GameState& s, Player p, Action a) {
  Ship& ship = s.ship(p);
  const GameParams& prm = s.params;
  switch (a) {
    case Action::kDoNothing:
      break;
    case Action::kRotateClockwise:
      ship.heading = (ship.heading + 1) % kHeadingSteps;
      break;
    case Action::kRotateAnticlockwise:
      ship.heading = (ship.heading + kHeadingSteps - 1) % kHeadingSteps;
      break;
    case Action::kThrust: {
      const Vec2 dir = kHeadings[ship.heading];
      ship.vel.x += prm.thrust_speed * dir.x;
      ship.vel.y += prm.thrust_speed * dir.y;
      break;
    }
    case Action::kShoot: {
      if (ship.cooldown > 0) break;
      MissileBuffer& m = s.missiles;
      if (m.count >= MissileBuffer::kCapacity) throw std::logic_error("missile buffer overflow");
      const Vec2 dir = kHeadings[ship.heading];
      const double offset = prm.ship_radius + kMissileRadius + 1;
      const int i = m.count++;
      m.x[i] = kernels::wrap_coordinate(ship.pos.x + offset * dir.x, kArenaWidth);
      m.y[i] = kernels::wrap_coordinate(ship.pos.y + offset * dir.y, kArenaHeight);
      m.vx[i] = prm.max_missile_speed * dir.x;
      m.vy[i] = prm.max_missile_speed * dir.y;
      m.age[i] = 0;
      m.owner[i] = static_cast<std::uint8_t>(index(p));
      ship.missiles_fired += 1;
      ship.running_score -= prm.missile_cost;
      ship.cooldown = prm.cooldown;
      const double kick = s.recoil_rng[index(p)].uniform() * prm.recoil_max;
      ship.vel.x -= kick * dir.x;
      ship.vel.y -= kick * dir.y;
      break;
    }
  }
  clamp_speed(ship.vel, prm.max_ship_speed);
}

}  // namespace

const char* action_name(Action a) {
  switch (a) {
    case Action::kDoNothing: return "DoNothing";
    case Action::kRotateClockwise: return "RotateClockwise";
    case Action::kRotateAnticlockwise: return "RotateAnticlockwise";
    case Action::kThrust: return "Thrust";
    case Action::kShoot: return "Shoot";
  }
  return "Invalid";
}

bool MissileBuffer::operator==(const MissileBuffer& o) const {
  if (count != o.count) return false;
  for (int i = 0; i < count; ++i) {
    if (x[i] != o.x[i] || y[i] != o.y[i] || vx[i] != o.vx[i] || vy[i] != o.vy[i] ||
        age[i] != o.age[i] || owner[i] != o.owner[i]) {
      return false;
    }
  }
  return true;
}

Vec2 heading_vector(int heading) {
  return kHeadings[static_cast<std::size_t>(((heading % kHeadingSteps) + kHeadingSteps) %
                                            kHeadingSteps)];
}

GameState init_state(const GameParams& params, std::uint64_t seed) {
  return init_state(params, {mix_seed({seed, 1}), mix_seed({seed, 2})});
}

GameState init_state(const GameParams& params, std::array<std::uint64_t, 2> recoil_seeds) {
  GameState s{};
  s.params = params;
  s.ships[0].pos = {-kArenaWidth / 4, 0};
  s.ships[0].heading = 0;
  s.ships[1].pos = {kArenaWidth / 4, 0};
  s.ships[1].heading = kHeadingSteps / 2;
  s.recoil_rng = std::array<Rng, 2>{Rng(recoil_seeds[0]), Rng(recoil_seeds[1])};
  s.missiles.x.fill(0);
  s.missiles.y.fill(0);
  s.missiles.vx.fill(0);
  s.missiles.vy.fill(0);
  s.missiles.age.fill(0);
  s.missiles.owner.fill(0);
  return s;
}

void step(GameState& s, Action a1, Action a2) {
  if (s.finished()) throw std::logic_error("step called on a finished game");
  if (!is_valid(a1) || !is_valid(a2)) {
    throw std::invalid_argument("action outside enumeration: " +
                                std::to_string(static_cast<int>(is_valid(a1) ? a2 : a1)));
  }

  apply_action(s, Player::kOne, a1);
  apply_action(s, Player::kTwo, a2);

  for (Ship& ship : s.ships) {
    ship.pos.x = kernels::wrap_coordinate(ship.pos.x + ship.vel.x, kArenaWidth);
    ship.pos.y = kernels::wrap_coordinate(ship.pos.y + ship.vel.y, kArenaHeight);
    ship.vel.x *= kFriction;
    ship.vel.y *= kFriction;
  }

  MissileBuffer& m = s.missiles;
  const auto n = static_cast<std::size_t>(m.count);
  if (n > 0) {
    const auto& k = kernels::active();
    k.integrate_wrap(std::span(m.x.data(), n), std::span(m.vx.data(), n), kArenaWidth);
    k.integrate_wrap(std::span(m.y.data(), n), std::span(m.vy.data(), n), kArenaHeight);

    std::array<std::array<std::uint8_t, MissileBuffer::kCapacity>, 2> near;
    const double reach = s.params.ship_radius + kMissileRadius;
    for (int p = 0; p < 2; ++p) {
      k.within_radius(std::span<const double>(m.x.data(), n), std::span<const double>(m.y.data(), n),
                      s.ships[p].pos.x, s.ships[p].pos.y, kArenaWidth, kArenaHeight,
                      reach * reach, std::span(near[p].data(), n));
    }

    int kept = 0;
    for (int i = 0; i < m.count; ++i) {
      const int age = m.age[i] + 1;
      if (age > kMissileLifetime) continue;
      const int owner = m.owner[i];
      if (near[1 - owner][i]) {
        Ship& shooter = s.ships[owner];
        shooter.hits += 1;
        shooter.running_score += kHitReward;
        continue;
      }
      if (kept != i) {
        m.x[kept] = m.x[i];
        m.y[kept] = m.y[i];
        m.vx[kept] = m.vx[i];
        m.vy[kept] = m.vy[i];
        m.owner[kept] = m.owner[i];
      }
      m.age[kept] = age;
      ++kept;
    }
    m.count = kept;
  }

  for (Ship& ship : s.ships) {
    if (ship.cooldown > 0) ship.cooldown -= 1;
  }
  s.tick += 1;
}

double score(const GameParams& params, const Ship& ship) {
  return kHitReward * ship.hits - params.missile_cost * ship.missiles_fired;
}

double score(const GameState& state, Player p) { return score(state.params, state.ship(p)); }

GameOutcome outcome(const GameState& state) {
  if (!state.finished()) {
    throw std::logic_error("outcome requested at tick " + std::to_string(state.tick));
  }
  const double s1 = score(state, Player::kOne);
  const double s2 = score(state, Player::kTwo);
  const Winner w = s1 > s2 ? Winner::kP1 : (s2 > s1 ? Winner::kP2 : Winner::kDraw);
  return {w, {s1, s2}};
}

}  // namespace skilldepth::game
