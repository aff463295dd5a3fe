// AArch64 variant. Two float64x2 accumulators hold lanes {0,1} and {2,3} so
// the summation order matches the scalar reference exactly.

#include "esnrae/kernels.hpp"

#include <arm_neon.h>

namespace esnrae::kernels {
namespace {

inline double reduce_lanes(float64x2_t lo, float64x2_t hi) {
    const double l0 = vgetq_lane_f64(lo, 0);
    const double l1 = vgetq_lane_f64(lo, 1);
    const double l2 = vgetq_lane_f64(hi, 0);
    const double l3 = vgetq_lane_f64(hi, 1);
    return (l0 + l1) + (l2 + l3);
}

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double total = reduce_lanes(lo, hi);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

void gemv_neon(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot_neon(a + r * cols, x, cols);
}

void gemv_add_neon(const double* a, std::size_t rows, std::size_t cols, const double* x,
                   double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] += dot_neon(a + r * cols, x, cols);
}

constexpr KernelTable kNeon{Isa::neon, dot_neon, gemv_neon, gemv_add_neon};

}  // namespace

const KernelTable& neon_table() noexcept { return kNeon; }

}  // namespace esnrae::kernels
