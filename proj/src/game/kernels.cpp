#include "skilldepth/game/kernels.hpp"

#include <atomic>

#if defined(__x86_64__) || defined(_M_X64)
#define SKILLDEPTH_X86 1
#include <immintrin.h>
#else
#define SKILLDEPTH_X86 0
#endif

#if defined(__aarch64__) && defined(__ARM_NEON)
#define SKILLDEPTH_NEON 1
#include <arm_neon.h>
#else
#define SKILLDEPTH_NEON 0
#endif

namespace skilldepth::game::kernels {

namespace {

void integrate_wrap_scalar(std::span<double> pos, std::span<const double> vel, double extent) {
  for (std::size_t i = 0; i < pos.size(); ++i) {
    pos[i] = wrap_coordinate(pos[i] + vel[i], extent);
  }
}

void within_radius_scalar(std::span<const double> x, std::span<const double> y, double cx,
                          double cy, double width, double height, double radius_sq,
                          std::span<std::uint8_t> hit) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = toroidal_delta(x[i], cx, width);
    const double dy = toroidal_delta(y[i], cy, height);
    hit[i] = (dx * dx + dy * dy) <= radius_sq ? 1 : 0;
  }
}

constexpr MissileKernels kScalar{Isa::kScalar, integrate_wrap_scalar, within_radius_scalar};

#if SKILLDEPTH_X86

// No "fma" in the target list: products and sums must round exactly like the
// scalar path.
__attribute__((target("avx2"))) void integrate_wrap_avx2(std::span<double> pos,
                                                         std::span<const double> vel,
                                                         double extent) {
  const std::size_t n = pos.size();
  const __m256d ext = _mm256_set1_pd(extent);
  const __m256d hi = _mm256_set1_pd(0.5 * extent);
  const __m256d lo = _mm256_set1_pd(-(0.5 * extent));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_add_pd(_mm256_loadu_pd(pos.data() + i), _mm256_loadu_pd(vel.data() + i));
    const __m256d over = _mm256_cmp_pd(p, hi, _CMP_GT_OQ);
    const __m256d under = _mm256_cmp_pd(p, lo, _CMP_LT_OQ);
    p = _mm256_blendv_pd(p, _mm256_sub_pd(p, ext), over);
    p = _mm256_blendv_pd(p, _mm256_add_pd(p, ext), under);
    _mm256_storeu_pd(pos.data() + i, p);
  }
  for (; i < n; ++i) pos[i] = wrap_coordinate(pos[i] + vel[i], extent);
}

__attribute__((target("avx2"))) inline __m256d toroidal_delta_avx2(__m256d a, __m256d b,
                                                                    __m256d extent) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d d = _mm256_andnot_pd(sign, _mm256_sub_pd(a, b));
  const __m256d other = _mm256_sub_pd(extent, d);
  // min(other, d) with ties resolved to d, same as the scalar select
  return _mm256_blendv_pd(d, other, _mm256_cmp_pd(other, d, _CMP_LT_OQ));
}

__attribute__((target("avx2"))) void within_radius_avx2(std::span<const double> x,
                                                        std::span<const double> y, double cx,
                                                        double cy, double width, double height,
                                                        double radius_sq,
                                                        std::span<std::uint8_t> hit) {
  const std::size_t n = x.size();
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  const __m256d w = _mm256_set1_pd(width);
  const __m256d h = _mm256_set1_pd(height);
  const __m256d r2 = _mm256_set1_pd(radius_sq);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = toroidal_delta_avx2(_mm256_loadu_pd(x.data() + i), vcx, w);
    const __m256d dy = toroidal_delta_avx2(_mm256_loadu_pd(y.data() + i), vcy, h);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(d2, r2, _CMP_LE_OQ));
    hit[i + 0] = static_cast<std::uint8_t>(mask & 1);
    hit[i + 1] = static_cast<std::uint8_t>((mask >> 1) & 1);
    hit[i + 2] = static_cast<std::uint8_t>((mask >> 2) & 1);
    hit[i + 3] = static_cast<std::uint8_t>((mask >> 3) & 1);
  }
  if (i < n) {
    within_radius_scalar(x.subspan(i), y.subspan(i), cx, cy, width, height, radius_sq,
                         hit.subspan(i));
  }
}

constexpr MissileKernels kAvx2{Isa::kAvx2, integrate_wrap_avx2, within_radius_avx2};

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

#endif  // SKILLDEPTH_X86

#if SKILLDEPTH_NEON

void integrate_wrap_neon(std::span<double> pos, std::span<const double> vel, double extent) {
  const std::size_t n = pos.size();
  const float64x2_t ext = vdupq_n_f64(extent);
  const float64x2_t hi = vdupq_n_f64(0.5 * extent);
  const float64x2_t lo = vdupq_n_f64(-(0.5 * extent));
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t p = vaddq_f64(vld1q_f64(pos.data() + i), vld1q_f64(vel.data() + i));
    p = vbslq_f64(vcgtq_f64(p, hi), vsubq_f64(p, ext), p);
    p = vbslq_f64(vcltq_f64(p, lo), vaddq_f64(p, ext), p);
    vst1q_f64(pos.data() + i, p);
  }
  for (; i < n; ++i) pos[i] = wrap_coordinate(pos[i] + vel[i], extent);
}

inline float64x2_t toroidal_delta_neon(float64x2_t a, float64x2_t b, float64x2_t extent) {
  const float64x2_t d = vabsq_f64(vsubq_f64(a, b));
  const float64x2_t other = vsubq_f64(extent, d);
  return vbslq_f64(vcltq_f64(other, d), other, d);
}

void within_radius_neon(std::span<const double> x, std::span<const double> y, double cx,
                        double cy, double width, double height, double radius_sq,
                        std::span<std::uint8_t> hit) {
  const std::size_t n = x.size();
  const float64x2_t vcx = vdupq_n_f64(cx);
  const float64x2_t vcy = vdupq_n_f64(cy);
  const float64x2_t w = vdupq_n_f64(width);
  const float64x2_t h = vdupq_n_f64(height);
  const float64x2_t r2 = vdupq_n_f64(radius_sq);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = toroidal_delta_neon(vld1q_f64(x.data() + i), vcx, w);
    const float64x2_t dy = toroidal_delta_neon(vld1q_f64(y.data() + i), vcy, h);
    // vmulq + vaddq, never vfmaq: must round like the scalar path
    const float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
    const uint64x2_t le = vcleq_f64(d2, r2);
    hit[i + 0] = static_cast<std::uint8_t>(vgetq_lane_u64(le, 0) & 1);
    hit[i + 1] = static_cast<std::uint8_t>(vgetq_lane_u64(le, 1) & 1);
  }
  if (i < n) {
    within_radius_scalar(x.subspan(i), y.subspan(i), cx, cy, width, height, radius_sq,
                         hit.subspan(i));
  }
}

constexpr MissileKernels kNeon{Isa::kNeon, integrate_wrap_neon, within_radius_neon};

#endif  // SKILLDEPTH_NEON

const MissileKernels* detect_best() {
#if SKILLDEPTH_X86
  if (cpu_has_avx2()) return &kAvx2;
#endif
#if SKILLDEPTH_NEON
  return &kNeon;
#endif
  return &kScalar;
}

std::atomic<const MissileKernels*>& active_slot() {
  static std::atomic<const MissileKernels*> slot{detect_best()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "?";
}

const MissileKernels& scalar_kernels() { return kScalar; }

const MissileKernels* avx2_kernels() {
#if SKILLDEPTH_X86
  if (cpu_has_avx2()) return &kAvx2;
#endif
  return nullptr;
}

const MissileKernels* neon_kernels() {
#if SKILLDEPTH_NEON
  return &kNeon;
#else
  return nullptr;
#endif
}

const MissileKernels& active() { return *active_slot().load(std::memory_order_relaxed); }

bool set_active(Isa isa) {
  const MissileKernels* k = nullptr;
  switch (isa) {
    case Isa::kScalar: k = &kScalar; break;
    case Isa::kAvx2: k = avx2_kernels(); break;
    case Isa::kNeon: k = neon_kernels(); break;
  }
  if (k == nullptr) return false;
  active_slot().store(k, std::memory_order_relaxed);
  return true;
}

}  // namespace skilldepth::game::kernels
