#include <doctest.h>

#include <cstring>
#include <vector>

#include "skilldepth/game/engine.hpp"
#include "skilldepth/game/kernels.hpp"
#include "skilldepth/rng.hpp"

using namespace skilldepth;
using namespace skilldepth::game;

namespace {

std::vector<const kernels::MissileKernels*> vector_variants() {
  std::vector<const kernels::MissileKernels*> out;
  if (const auto* k = kernels::avx2_kernels()) out.push_back(k);
  if (const auto* k = kernels::neon_kernels()) out.push_back(k);
  return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// Positions near and across the wrap seams, including exact seam values.
double tricky(Rng& rng, double extent) {
  switch (rng.below(4)) {
    case 0: return extent / 2;
    case 1: return -extent / 2 + rng.uniform() * 1e-9;
    case 2: return (rng.uniform() - 0.5) * extent;
    default: return (rng.uniform() > 0.5 ? 1 : -1) * (extent / 2 - rng.uniform() * 10);
  }
}

class ActiveGuard {
 public:
  ActiveGuard() : saved_(kernels::active().isa) {}
  ~ActiveGuard() { kernels::set_active(saved_); }

 private:
  kernels::Isa saved_;
};

}  // namespace

TEST_CASE("scalar wrap and distance helpers") {
  CHECK(kernels::wrap_coordinate(321, 640) == -319);
  CHECK(kernels::wrap_coordinate(-321, 640) == 319);
  CHECK(kernels::wrap_coordinate(320, 640) == 320);
  CHECK(kernels::toroidal_delta(-300, 300, 640) == 40);
  CHECK(kernels::toroidal_delta(10, 30, 640) == 20);
}

TEST_CASE("vector kernels match the scalar reference bit for bit") {
  const auto& ref = kernels::scalar_kernels();
  const auto variants = vector_variants();
  if (variants.empty()) MESSAGE("no vector kernel on this CPU; scalar only");
  Rng rng(99);
  for (const auto* k : variants) {
    CAPTURE(kernels::isa_name(k->isa));
    for (int trial = 0; trial < 2000; ++trial) {
      // every length up to the buffer capacity, so tails are exercised
      const std::size_t n = static_cast<std::size_t>(trial % (MissileBuffer::kCapacity + 1));
      const double extent = trial % 2 == 0 ? kArenaWidth : kArenaHeight;
      std::vector<double> pos(n), vel(n);
      for (std::size_t i = 0; i < n; ++i) {
        pos[i] = tricky(rng, extent);
        vel[i] = (rng.uniform() - 0.5) * 20;
      }
      std::vector<double> a = pos, b = pos;
      ref.integrate_wrap(a, vel, extent);
      k->integrate_wrap(b, vel, extent);
      for (std::size_t i = 0; i < n; ++i) REQUIRE(same_bits(a[i], b[i]));

      std::vector<double> ys(n);
      for (auto& y : ys) y = tricky(rng, kArenaHeight);
      const double cx = tricky(rng, kArenaWidth);
      const double cy = tricky(rng, kArenaHeight);
      const double r = 5 + rng.uniform() * 300;
      std::vector<std::uint8_t> ha(n, 7), hb(n, 9);
      ref.within_radius(a, ys, cx, cy, kArenaWidth, kArenaHeight, r * r, ha);
      k->within_radius(a, ys, cx, cy, kArenaWidth, kArenaHeight, r * r, hb);
      for (std::size_t i = 0; i < n; ++i) REQUIRE(ha[i] == hb[i]);
    }
  }
}

TEST_CASE("hit test includes the boundary and wraps") {
  const auto& ref = kernels::scalar_kernels();
  const std::vector<double> x = {334, 335, -310, 310};
  const std::vector<double> y = {0, 0, 0, 239};
  std::vector<std::uint8_t> hit(4);
  ref.within_radius(x, y, 310, 0, kArenaWidth, kArenaHeight, 24.0 * 24.0, hit);
  CHECK(hit[0] == 1);
  CHECK(hit[1] == 0);
  CHECK(hit[2] == 1);  // 20 px across the seam
  CHECK(hit[3] == 0);
}

TEST_CASE("whole games agree across kernel variants") {
  ActiveGuard guard;
  const ParamSpace space = ParamSpace::six_dim();
  for (const auto* k : vector_variants()) {
    Rng pick(5);
    for (int trial = 0; trial < 20; ++trial) {
      const GameParams p = params_from_genome(space, space.random_genome(pick));
      GameState a = init_state(p, trial);
      GameState b = a;
      Rng acts(trial);
      while (!a.finished()) {
        const auto x = static_cast<Action>(acts.below(kNumActions));
        const auto y = static_cast<Action>(acts.below(kNumActions));
        REQUIRE(kernels::set_active(kernels::Isa::kScalar));
        step(a, x, y);
        REQUIRE(kernels::set_active(k->isa));
        step(b, x, y);
        REQUIRE(a == b);
      }
    }
  }
}

TEST_CASE("selecting an unavailable variant changes nothing") {
  ActiveGuard guard;
  const kernels::Isa before = kernels::active().isa;
  if (kernels::neon_kernels() == nullptr) {
    CHECK_FALSE(kernels::set_active(kernels::Isa::kNeon));
    CHECK(kernels::active().isa == before);
  }
  CHECK(kernels::set_active(kernels::Isa::kScalar));
  CHECK(kernels::active().isa == kernels::Isa::kScalar);
}
