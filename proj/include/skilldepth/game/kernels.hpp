#pragma once

// Data-parallel inner loops of the engine: missile integration and the
// missile-vs-ship proximity test. Each kernel has a scalar reference and
// vector variants that must produce bit-identical results; the engine picks
// one at startup from the running CPU.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace skilldepth::game::kernels {

enum class Isa : std::uint8_t { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

struct MissileKernels {
  Isa isa;
  // pos[i] += vel[i], then wraps into [-extent/2, extent/2].
  void (*integrate_wrap)(std::span<double> pos, std::span<const double> vel, double extent);
  // hit[i] = 1 iff the toroidal distance from (x[i], y[i]) to `center` is at
  // most sqrt(radius_sq), else 0. `width`/`height` are the torus periods.
  void (*within_radius)(std::span<const double> x, std::span<const double> y, double cx,
                        double cy, double width, double height, double radius_sq,
                        std::span<std::uint8_t> hit);
};

const MissileKernels& scalar_kernels();
// nullptr when the variant is not compiled in or the CPU lacks it.
const MissileKernels* avx2_kernels();
const MissileKernels* neon_kernels();

// Best variant supported by this CPU unless overridden by set_active().
const MissileKernels& active();
// Returns false (and changes nothing) if `isa` is unavailable here.
bool set_active(Isa isa);

// Scalar wrap of a single coordinate, shared by ship integration.
inline double wrap_coordinate(double p, double extent) {
  const double half = 0.5 * extent;
  if (p > half) return p - extent;
  if (p < -half) return p + extent;
  return p;
}

inline double toroidal_delta(double a, double b, double extent) {
  double d = a - b;
  d = d < 0 ? -d : d;
  const double other = extent - d;
  return other < d ? other : d;
}

}  // namespace skilldepth::game::kernels
