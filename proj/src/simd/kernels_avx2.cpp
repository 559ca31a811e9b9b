// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "hlmf/simd.hpp"

namespace hlmf::simd::detail {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
        s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
        s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), s2);
        s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), s3);
    }
    for (; i + 4 <= n; i += 4)
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    double s = hsum(_mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3)));
    for (; i < n; ++i) s = std::fma(a[i], b[i], s);
    return s;
}

void gemv(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y) {
    std::size_t i = 0;
    // four rows at a time share the loads of x
    for (; i + 4 <= rows; i += 4) {
        const double* r0 = A + i * cols;
        const double* r1 = r0 + cols;
        const double* r2 = r1 + cols;
        const double* r3 = r2 + cols;
        __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
        __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 4 <= cols; j += 4) {
            __m256d xv = _mm256_loadu_pd(x + j);
            s0 = _mm256_fmadd_pd(_mm256_loadu_pd(r0 + j), xv, s0);
            s1 = _mm256_fmadd_pd(_mm256_loadu_pd(r1 + j), xv, s1);
            s2 = _mm256_fmadd_pd(_mm256_loadu_pd(r2 + j), xv, s2);
            s3 = _mm256_fmadd_pd(_mm256_loadu_pd(r3 + j), xv, s3);
        }
        double t0 = hsum(s0), t1 = hsum(s1), t2 = hsum(s2), t3 = hsum(s3);
        for (; j < cols; ++j) {
            t0 = std::fma(r0[j], x[j], t0);
            t1 = std::fma(r1[j], x[j], t1);
            t2 = std::fma(r2[j], x[j], t2);
            t3 = std::fma(r3[j], x[j], t3);
        }
        y[i] = t0;
        y[i + 1] = t1;
        y[i + 2] = t2;
        y[i + 3] = t3;
    }
    for (; i < rows; ++i) y[i] = dot(A + i * cols, x, cols);
}

void hadamard_axpby(double alpha, const double* a, const double* b, double beta,
                    const double* c, double* out, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha), vb = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        __m256d r = _mm256_mul_pd(vb, _mm256_loadu_pd(c + i));
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, ab, r));
    }
    for (; i < n; ++i) out[i] = std::fma(alpha, a[i] * b[i], beta * c[i]);
}

void axpby(double a, const double* x, double b, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), r));
    }
    for (; i < n; ++i) y[i] = std::fma(a, x[i], b * y[i]);
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
    }
    alignas(32) double buf[4];
    _mm256_store_pd(buf, m);
    double r = std::fmax(std::fmax(buf[0], buf[1]), std::fmax(buf[2], buf[3]));
    for (; i < n; ++i) r = std::fmax(r, std::fabs(a[i] - b[i]));
    return r;
}

double max_abs(const double* a, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(a + i)));
    alignas(32) double buf[4];
    _mm256_store_pd(buf, m);
    double r = std::fmax(std::fmax(buf[0], buf[1]), std::fmax(buf[2], buf[3]));
    for (; i < n; ++i) r = std::fmax(r, std::fabs(a[i]));
    return r;
}

}  // namespace

const KernelTable avx2_table{Isa::avx2, dot, gemv, hadamard_axpby, axpby, max_abs_diff, max_abs};

}  // namespace hlmf::simd::detail
