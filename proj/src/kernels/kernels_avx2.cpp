// Compiled with -mavx2 -ffp-contract=off; only reached after a CPUID check.

#include "esnrae/kernels.hpp"

#include <immintrin.h>

namespace esnrae::kernels {
namespace {

inline double reduce_lanes(__m256d acc) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, prod);
    }
    double total = reduce_lanes(acc);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

// Four rows per pass share each load of x; per-row lane order is unchanged.
template <bool Accumulate>
void gemv_avx2_impl(const double* a, std::size_t rows, std::size_t cols, const double* x,
                    double* y) {
    std::size_t r = 0;
    for (; r + 4 <= rows; r += 4) {
        const double* a0 = a + r * cols;
        const double* a1 = a0 + cols;
        const double* a2 = a1 + cols;
        const double* a3 = a2 + cols;
        __m256d c0 = _mm256_setzero_pd();
        __m256d c1 = _mm256_setzero_pd();
        __m256d c2 = _mm256_setzero_pd();
        __m256d c3 = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= cols; i += 4) {
            const __m256d xv = _mm256_loadu_pd(x + i);
            c0 = _mm256_add_pd(c0, _mm256_mul_pd(_mm256_loadu_pd(a0 + i), xv));
            c1 = _mm256_add_pd(c1, _mm256_mul_pd(_mm256_loadu_pd(a1 + i), xv));
            c2 = _mm256_add_pd(c2, _mm256_mul_pd(_mm256_loadu_pd(a2 + i), xv));
            c3 = _mm256_add_pd(c3, _mm256_mul_pd(_mm256_loadu_pd(a3 + i), xv));
        }
        double t0 = reduce_lanes(c0);
        double t1 = reduce_lanes(c1);
        double t2 = reduce_lanes(c2);
        double t3 = reduce_lanes(c3);
        for (; i < cols; ++i) {
            t0 += a0[i] * x[i];
            t1 += a1[i] * x[i];
            t2 += a2[i] * x[i];
            t3 += a3[i] * x[i];
        }
        if constexpr (Accumulate) {
            y[r] += t0;
            y[r + 1] += t1;
            y[r + 2] += t2;
            y[r + 3] += t3;
        } else {
            y[r] = t0;
            y[r + 1] = t1;
            y[r + 2] = t2;
            y[r + 3] = t3;
        }
    }
    for (; r < rows; ++r) {
        const double t = dot_avx2(a + r * cols, x, cols);
        if constexpr (Accumulate) {
            y[r] += t;
        } else {
            y[r] = t;
        }
    }
}

void gemv_avx2(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
    gemv_avx2_impl<false>(a, rows, cols, x, y);
}

void gemv_add_avx2(const double* a, std::size_t rows, std::size_t cols, const double* x,
                   double* y) {
    gemv_avx2_impl<true>(a, rows, cols, x, y);
}

constexpr KernelTable kAvx2{Isa::avx2, dot_avx2, gemv_avx2, gemv_add_avx2};

}  // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

}  // namespace esnrae::kernels
