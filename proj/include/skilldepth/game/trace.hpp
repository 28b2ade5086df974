#pragma once

#include <ostream>
#include <string>

#include "skilldepth/game/engine.hpp"

namespace skilldepth::game {

// One JSON object per tick, keys in a fixed order:
//   {"tick", "actions": [a1, a2],
//    "ships": [{"x", "y", "vx", "vy", "heading", "cooldown", "missiles_fired", "hits"}, x2],
//    "missiles": [{"owner", "x", "y", "vx", "vy", "age"}, ...],
//    "scores": [s1, s2]}
// Positions are screen coordinates (origin top-left, 640x480); heading in
// radians; owner is 1 or 2; `tick` is the tick count after the step.
std::string trace_record(const GameState& state, Action a1, Action a2);

class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& out) : out_(out) {}
  void record(const GameState& state, Action a1, Action a2) {
    out_ << trace_record(state, a1, a2) << '\n';
  }

 private:
  std::ostream& out_;
};

}  // namespace skilldepth::game
