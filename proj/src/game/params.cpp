#include "skilldepth/game/params.hpp"

#include <algorithm>
#include <stdexcept>

namespace skilldepth::game {

namespace {

void assign(GameParams& p, Field f, double v) {
  switch (f) {
    case Field::kMaxShipSpeed: p.max_ship_speed = v; break;
    case Field::kThrustSpeed: p.thrust_speed = v; break;
    case Field::kMaxMissileSpeed: p.max_missile_speed = v; break;
    case Field::kCooldown: p.cooldown = static_cast<int>(v); break;
    case Field::kMissileCost: p.missile_cost = v; break;
    case Field::kShipRadius: p.ship_radius = v; break;
  }
}

std::vector<Dimension> table_dims() {
  return {
      {Field::kMaxShipSpeed, {4, 6, 8, 10}},
      {Field::kThrustSpeed, {1, 2, 3, 4, 5}},
      {Field::kMaxMissileSpeed, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}},
      {Field::kCooldown, {1, 2, 3, 4, 5, 6, 7, 8, 9}},
      {Field::kMissileCost, {0, 1, 5, 10, 20, 50, 75, 100}},
  };
}

}  // namespace

std::string_view field_name(Field f) {
  switch (f) {
    case Field::kMaxShipSpeed: return "v_s";
    case Field::kThrustSpeed: return "v_t";
    case Field::kMaxMissileSpeed: return "v_m";
    case Field::kCooldown: return "d";
    case Field::kMissileCost: return "c";
    case Field::kShipRadius: return "sr";
  }
  return "?";
}

Field field_from_name(std::string_view name) {
  for (Field f : {Field::kMaxShipSpeed, Field::kThrustSpeed, Field::kMaxMissileSpeed,
                  Field::kCooldown, Field::kMissileCost, Field::kShipRadius}) {
    if (field_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown dimension '" + std::string(name) + "'");
}

ParamSpace::ParamSpace(std::vector<Dimension> dims, GameParams base)
    : dims_(std::move(dims)), base_(base) {
  if (dims_.empty()) throw std::invalid_argument("parameter space has no dimensions");
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const auto& values = dims_[d].values;
    if (values.size() < 2) {
      throw std::invalid_argument("dimension " + std::string(field_name(dims_[d].field)) +
                                  " needs at least two values");
    }
    auto sorted = values;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("dimension " + std::string(field_name(dims_[d].field)) +
                                  " repeats a value");
    }
    for (std::size_t e = 0; e < d; ++e) {
      if (dims_[e].field == dims_[d].field) {
        throw std::invalid_argument("field listed twice in parameter space");
      }
    }
  }
}

ParamSpace ParamSpace::five_dim() { return ParamSpace(table_dims()); }

ParamSpace ParamSpace::six_dim() {
  auto dims = table_dims();
  dims.push_back({Field::kShipRadius, {10, 20, 30, 40, 50}});
  return ParamSpace(std::move(dims));
}

std::uint64_t ParamSpace::cardinality() const {
  std::uint64_t n = 1;
  for (const auto& d : dims_) n *= d.values.size();
  return n;
}

bool ParamSpace::contains(const Genome& g) const {
  if (g.size() != dims_.size()) return false;
  for (std::size_t d = 0; d < g.size(); ++d) {
    if (g[d] < 0 || g[d] >= arity(d)) return false;
  }
  return true;
}

Genome ParamSpace::genome_at(std::uint64_t index) const {
  if (index >= cardinality()) throw std::out_of_range("genome index past end of space");
  Genome g(dims_.size());
  for (std::size_t d = dims_.size(); d-- > 0;) {
    const auto a = static_cast<std::uint64_t>(arity(d));
    g[d] = static_cast<int>(index % a);
    index /= a;
  }
  return g;
}

std::uint64_t ParamSpace::index_of(const Genome& g) const {
  if (!contains(g)) throw std::out_of_range("genome outside parameter space");
  std::uint64_t index = 0;
  for (std::size_t d = 0; d < g.size(); ++d) {
    index = index * static_cast<std::uint64_t>(arity(d)) + static_cast<std::uint64_t>(g[d]);
  }
  return index;
}

Genome ParamSpace::random_genome(Rng& rng) const {
  Genome g(dims_.size());
  for (std::size_t d = 0; d < g.size(); ++d) {
    g[d] = static_cast<int>(rng.below(static_cast<std::uint32_t>(arity(d))));
  }
  return g;
}

int ParamSpace::find(Field f) const {
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    if (dims_[d].field == f) return static_cast<int>(d);
  }
  return -1;
}

GameParams params_from_genome(const ParamSpace& space, const Genome& genome) {
  if (genome.size() != space.size()) {
    throw std::out_of_range("genome length " + std::to_string(genome.size()) +
                            " does not match space dimension " +
                            std::to_string(space.size()));
  }
  GameParams p = space.base();
  for (std::size_t d = 0; d < genome.size(); ++d) {
    if (genome[d] < 0 || genome[d] >= space.arity(d)) {
      throw std::out_of_range("genome index " + std::to_string(genome[d]) +
                              " out of range in dimension " + std::to_string(d));
    }
    assign(p, space.dim(d).field, space.dim(d).values[static_cast<std::size_t>(genome[d])]);
  }
  return p;
}

std::string to_string(const Genome& g) {
  std::string s = "(";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(g[i]);
  }
  return s + ")";
}

}  // namespace skilldepth::game
