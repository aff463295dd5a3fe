#include "esnrae/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace esnrae::kernels {
namespace {

const KernelTable* table_for(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return &scalar_table();
        case Isa::avx2:
#if defined(ESNRAE_HAVE_AVX2)
            return &avx2_table();
#else
            return nullptr;
#endif
        case Isa::neon:
#if defined(ESNRAE_HAVE_NEON)
            return &neon_table();
#else
            return nullptr;
#endif
    }
    return nullptr;
}

const KernelTable* detect() noexcept {
    if (const char* env = std::getenv("ESNRAE_ISA")) {
        const std::string_view want{env};
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (want == isa_name(isa) && isa_available(isa)) return table_for(isa);
        }
    }
    if (isa_available(Isa::avx2)) return table_for(Isa::avx2);
    if (isa_available(Isa::neon)) return table_for(Isa::neon);
    return &scalar_table();
}

std::atomic<const KernelTable*>& slot() noexcept {
    static std::atomic<const KernelTable*> current{detect()};
    return current;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(ESNRAE_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::neon:
#if defined(ESNRAE_HAVE_NEON)
            return true;  // mandatory on AArch64
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_relaxed); }

bool force_isa(Isa isa) noexcept {
    if (!isa_available(isa)) return false;
    slot().store(table_for(isa), std::memory_order_relaxed);
    return true;
}

}  // namespace esnrae::kernels
