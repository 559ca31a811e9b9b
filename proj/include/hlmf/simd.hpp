#pragma once
// Dense kernels used by every solve. The scalar table is the reference; the
// AVX2 table must agree with it up to summation-order rounding.

#include <cstddef>
#include <string_view>

namespace hlmf::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y = A x, A row-major rows x cols
    void (*gemv)(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y);
    // out = alpha * a .* b + beta * c
    void (*hadamard_axpby)(double alpha, const double* a, const double* b, double beta,
                           const double* c, double* out, std::size_t n);
    // y = a x + b y
    void (*axpby)(double a, const double* x, double b, double* y, std::size_t n);
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
    double (*max_abs)(const double* a, std::size_t n);
};

bool isa_supported(Isa isa);
const KernelTable& kernels(Isa isa);
// Active table: best supported unless overridden with set_active.
const KernelTable& kernels();
void set_active(Isa isa);
Isa active_isa();
std::string_view isa_name(Isa isa);

namespace detail {
extern const KernelTable scalar_table;
#if defined(HLMF_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace hlmf::simd
