#include "skilldepth/game/trace.hpp"

#include <json.hpp>

namespace skilldepth::game {

std::string trace_record(const GameState& state, Action a1, Action a2) {
  using nlohmann::ordered_json;
  ordered_json rec;
  rec["tick"] = state.tick;
  rec["actions"] = {action_name(a1), action_name(a2)};
  ordered_json ships = ordered_json::array();
  for (const Ship& s : state.ships) {
    const Vec2 p = s.screen_position();
    ordered_json js;
    js["x"] = p.x;
    js["y"] = p.y;
    js["vx"] = s.vel.x;
    js["vy"] = s.vel.y;
    js["heading"] = s.heading_radians();
    js["cooldown"] = s.cooldown;
    js["missiles_fired"] = s.missiles_fired;
    js["hits"] = s.hits;
    ships.push_back(std::move(js));
  }
  rec["ships"] = std::move(ships);
  ordered_json missiles = ordered_json::array();
  const MissileBuffer& m = state.missiles;
  for (int i = 0; i < m.count; ++i) {
    ordered_json jm;
    jm["owner"] = m.owner[i] + 1;
    jm["x"] = m.x[i] + kArenaWidth / 2;
    jm["y"] = m.y[i] + kArenaHeight / 2;
    jm["vx"] = m.vx[i];
    jm["vy"] = m.vy[i];
    jm["age"] = m.age[i];
    missiles.push_back(std::move(jm));
  }
  rec["missiles"] = std::move(missiles);
  rec["scores"] = {score(state, Player::kOne), score(state, Player::kTwo)};
  return rec.dump();
}

}  // namespace skilldepth::game
