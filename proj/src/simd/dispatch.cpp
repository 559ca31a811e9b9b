#include <atomic>

#include "hlmf/errors.hpp"
#include "hlmf/simd.hpp"

namespace hlmf::simd {
namespace {

Isa best_isa() {
#if defined(HLMF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
    return Isa::scalar;
}

std::atomic<const KernelTable*>& active_slot() {
    static std::atomic<const KernelTable*> slot{&kernels(best_isa())};
    return slot;
}

}  // namespace

bool isa_supported(Isa isa) {
    if (isa == Isa::scalar) return true;
    return best_isa() == Isa::avx2;
}

const KernelTable& kernels(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return detail::scalar_table;
        case Isa::avx2:
#if defined(HLMF_HAVE_AVX2)
            if (isa_supported(Isa::avx2)) return detail::avx2_table;
#endif
            break;
    }
    throw InvalidArgument("requested SIMD kernels are not supported on this CPU");
}

const KernelTable& kernels() { return *active_slot().load(std::memory_order_acquire); }

void set_active(Isa isa) { active_slot().store(&kernels(isa), std::memory_order_release); }

Isa active_isa() { return kernels().isa; }

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace hlmf::simd
