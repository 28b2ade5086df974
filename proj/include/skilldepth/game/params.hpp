#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skilldepth/rng.hpp"

namespace skilldepth {

// One index per searchable dimension, into that dimension's legal values.
using Genome = std::vector<int>;

namespace game {

// A single point of the game's rule space.
struct GameParams {
  double max_ship_speed = 4;     // px/tick
  double thrust_speed = 1;       // px/tick
  double max_missile_speed = 1;  // px/tick
  int cooldown = 1;              // ticks
  double missile_cost = 0;       // points per launch
  double ship_radius = 20;       // px

  // Engine constant, never searched. Upper bound of the uniform recoil
  // impulse applied on launch; 0 turns recoil off.
  double recoil_max = 1.0;

  bool operator==(const GameParams&) const = default;
};

enum class Field : std::uint8_t {
  kMaxShipSpeed,
  kThrustSpeed,
  kMaxMissileSpeed,
  kCooldown,
  kMissileCost,
  kShipRadius,
};

std::string_view field_name(Field f);
// Accepts the short names ("v_s", "v_t", "v_m", "d", "c", "sr").
Field field_from_name(std::string_view name);

struct Dimension {
  Field field;
  std::vector<double> values;
};

class ParamSpace {
 public:
  // Throws std::invalid_argument if a dimension has fewer than two values,
  // repeats a value, or a field appears twice.
  explicit ParamSpace(std::vector<Dimension> dims, GameParams base = {});

  // v_s, v_t, v_m, d, c; ship radius fixed at 20.
  static ParamSpace five_dim();
  // five_dim() plus ship radius.
  static ParamSpace six_dim();

  std::size_t size() const { return dims_.size(); }
  const Dimension& dim(std::size_t d) const { return dims_[d]; }
  std::span<const Dimension> dims() const { return dims_; }
  int arity(std::size_t d) const { return static_cast<int>(dims_[d].values.size()); }
  const GameParams& base() const { return base_; }

  // Number of distinct points, i.e. the product of arities.
  std::uint64_t cardinality() const;

  bool contains(const Genome& g) const;

  // Mixed-radix enumeration; dimension 0 is the most significant digit.
  Genome genome_at(std::uint64_t index) const;
  std::uint64_t index_of(const Genome& g) const;

  Genome random_genome(Rng& rng) const;

  // Position of a dimension by field, or -1.
  int find(Field f) const;

 private:
  std::vector<Dimension> dims_;
  GameParams base_;
};

// Throws std::out_of_range on a wrong length or an index outside its dimension.
GameParams params_from_genome(const ParamSpace& space, const Genome& genome);

std::string to_string(const Genome& g);

}  // namespace game
}  // namespace skilldepth
