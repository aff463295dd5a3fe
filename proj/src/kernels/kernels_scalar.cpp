#include "esnrae/kernels.hpp"

namespace esnrae::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        l0 += a[i] * b[i];
        l1 += a[i + 1] * b[i + 1];
        l2 += a[i + 2] * b[i + 2];
        l3 += a[i + 3] * b[i + 3];
    }
    double total = (l0 + l1) + (l2 + l3);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

void gemv_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x,
                 double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * cols, x, cols);
}

void gemv_add_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x,
                     double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] += dot_scalar(a + r * cols, x, cols);
}

constexpr KernelTable kScalar{Isa::scalar, dot_scalar, gemv_scalar, gemv_add_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace esnrae::kernels
