#include "hlmf/simd.hpp"

#include <cmath>

namespace hlmf::simd::detail {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void gemv(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) y[i] = dot(A + i * cols, x, cols);
}

void hadamard_axpby(double alpha, const double* a, const double* b, double beta,
                    const double* c, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * a[i] * b[i] + beta * c[i];
}

void axpby(double a, const double* x, double b, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
    return m;
}

double max_abs(const double* a, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(a[i]));
    return m;
}

}  // namespace

const KernelTable scalar_table{Isa::scalar, dot, gemv, hadamard_axpby, axpby, max_abs_diff, max_abs};

}  // namespace hlmf::simd::detail
