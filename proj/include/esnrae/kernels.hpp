#pragma once

// Dense inner-loop kernels with runtime ISA selection.
//
// Every variant accumulates a dot product in four interleaved lanes
// (lane l sums the products at indices i ≡ l mod 4), reduces the lanes as
// (l0 + l1) + (l2 + l3) and then adds the tail sequentially. Multiplication
// and addition are rounded separately (no fused multiply-add), so all
// variants produce bit-identical results and the ISA choice never changes a
// computed feature, readout or report.

#include <cstddef>
#include <span>
#include <string_view>

namespace esnrae::kernels {

enum class Isa { scalar, avx2, neon };

[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y[r] = dot(a[r*cols ..], x) for r < rows
    void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
    // y[r] += dot(a[r*cols ..], x)
    void (*gemv_add)(const double* a, std::size_t rows, std::size_t cols, const double* x,
                     double* y);
};

const KernelTable& scalar_table() noexcept;
#if defined(ESNRAE_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif
#if defined(ESNRAE_HAVE_NEON)
const KernelTable& neon_table() noexcept;
#endif

/// True when `isa` is compiled in and supported by the running CPU.
[[nodiscard]] bool isa_available(Isa isa) noexcept;

/// Best available ISA, unless overridden by ESNRAE_ISA=scalar|avx2|neon in the
/// environment or by force_isa().
[[nodiscard]] const KernelTable& active() noexcept;

/// Pins the dispatcher to `isa`. Returns false (and changes nothing) when the
/// ISA is unavailable.
bool force_isa(Isa isa) noexcept;

[[nodiscard]] inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot(a.data(), b.data(), a.size());
}

}  // namespace esnrae::kernels
