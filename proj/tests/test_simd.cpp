#include <doctest.h>

#include <random>
#include <vector>

#include "hlmf/simd.hpp"

using namespace hlmf::simd;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(g);
    return v;
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

}  // namespace

TEST_SUITE("simd") {
TEST_CASE("scalar table is always available") {
    CHECK(isa_supported(Isa::scalar));
    CHECK(isa_name(Isa::scalar) == "scalar");
    CHECK(kernels(Isa::scalar).dot != nullptr);
}

TEST_CASE("avx2 kernels match scalar reference") {
    if (!isa_supported(Isa::avx2)) {
        MESSAGE("avx2 not supported on this cpu; equivalence skipped");
        return;
    }
    const KernelTable& s = kernels(Isa::scalar);
    const KernelTable& v = kernels(Isa::avx2);
    std::mt19937_64 g(7);
    // lengths around the vector width and its remainders
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 63u, 256u, 1001u}) {
        auto a = random_vec(n, g), b = random_vec(n, g), c = random_vec(n, g);
        CHECK(rel(v.dot(a.data(), b.data(), n), s.dot(a.data(), b.data(), n)) <= 1e-13);
        CHECK(v.max_abs(a.data(), n) == s.max_abs(a.data(), n));
        CHECK(v.max_abs_diff(a.data(), b.data(), n) == s.max_abs_diff(a.data(), b.data(), n));

        std::vector<double> o1(n), o2(n);
        s.hadamard_axpby(0.7, a.data(), b.data(), -1.3, c.data(), o1.data(), n);
        v.hadamard_axpby(0.7, a.data(), b.data(), -1.3, c.data(), o2.data(), n);
        CHECK(s.max_abs_diff(o1.data(), o2.data(), n) <= 1e-15);

        auto y1 = c, y2 = c;
        s.axpby(0.3, a.data(), 1.1, y1.data(), n);
        v.axpby(0.3, a.data(), 1.1, y2.data(), n);
        CHECK(s.max_abs_diff(y1.data(), y2.data(), n) <= 1e-15);
    }
    for (std::size_t rows : {1u, 5u, 33u}) {
        for (std::size_t cols : {1u, 4u, 13u, 256u}) {
            auto A = random_vec(rows * cols, g), x = random_vec(cols, g);
            std::vector<double> y1(rows), y2(rows);
            s.gemv(A.data(), rows, cols, x.data(), y1.data());
            v.gemv(A.data(), rows, cols, x.data(), y2.data());
            CHECK(s.max_abs_diff(y1.data(), y2.data(), rows) <= 1e-13);
        }
    }
}

TEST_CASE("dispatch switch is honoured") {
    const Isa before = active_isa();
    set_active(Isa::scalar);
    CHECK(active_isa() == Isa::scalar);
    CHECK(&kernels() == &kernels(Isa::scalar));
    set_active(before);
    CHECK(active_isa() == before);
}
}
