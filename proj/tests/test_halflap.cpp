#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "common.hpp"
#include "hlmf/errors.hpp"
#include "hlmf/halflap.hpp"

using namespace hlmf;
using hlmf::test::eta0;

namespace {

constexpr double kPi = std::numbers::pi;

struct GaussSum {
    std::vector<double> a, c, s;
    double operator()(double x) const {
        double v = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) v += a[k] * std::exp(-(x - c[k]) * (x - c[k]) / (2 * s[k] * s[k]));
        return v;
    }
};

GaussSum random_gauss_sum(std::mt19937_64& g) {
    std::uniform_int_distribution<int> K(1, 3);
    std::uniform_real_distribution<double> A(-1.0, 1.0), C(-2.0, 2.0), S(0.3, 1.5);
    GaussSum f;
    for (int k = K(g); k > 0; --k) {
        f.a.push_back(A(g));
        f.c.push_back(C(g));
        f.s.push_back(S(g));
    }
    return f;
}

LineFunction line(std::function<double(double)> f) {
    LineFunction l;
    l.f = std::move(f);
    return l;
}

}  // namespace

TEST_SUITE("halflap") {
TEST_CASE("pv on a wide indicator is the closed-form tail") {
    LineFunction one;
    one.f = [](double) { return 1.0; };
    one.lo = -1e6;
    one.hi = 1e6;
    for (double x : {0.0, 0.5, -3.0}) {
        const double tail = (1.0 / (1e6 - x) + 1.0 / (1e6 + x)) / kPi;
        CHECK(std::fabs(pv_halflap(one, x)) <= 1e-6);
        CHECK(std::fabs(pv_halflap(one, x) - tail) <= 1e-12);
    }
}

TEST_CASE("pv on the bubble") {
    auto b = line(eta0);
    CHECK(std::fabs(pv_halflap(b, 0.0) - 2.0) <= 1e-4);
    for (double x : {-10.0, -3.3, 0.7, 5.0}) CHECK(std::fabs(pv_halflap(b, x) - 2.0 / (1 + x * x)) <= 1e-4);
}

TEST_CASE("pv torsion function") {
    LineFunction t;
    t.f = [](double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); };
    t.lo = -1.0;
    t.hi = 1.0;
    CHECK(std::fabs(pv_halflap(t, 0.0) - 1.0) <= 1e-5);
    CHECK(std::fabs(pv_halflap(t, 0.8) - 1.0) <= 1e-5);
    // Fourier evaluator as the oracle for the same function
    auto s = sample_uniform(t.f, 8.0, 1u << 16);
    auto r = fourier_halflap(s);
    CHECK(std::fabs(interpolate_uniform(s, 0.0) - 1.0) <= 1e-12);
    CHECK(std::fabs(r.values[s.values.size() / 2] - 1.0) <= 1e-5);
}

TEST_CASE("pv boundary evaluation is refused") {
    LineFunction t;
    t.f = [](double x) { return 1.0 - x * x; };
    t.lo = -1.0;
    t.hi = 1.0;
    CHECK_THROWS_AS(pv_halflap(t, 0.995), BoundaryEvaluationError);
    CHECK_NOTHROW(pv_halflap(t, 0.98));
}

TEST_CASE("fourier on a gaussian") {
    auto f = [](double x) { return std::exp(-x * x); };
    auto s = sample_uniform(f, 64.0, 1u << 14);
    FourierOptions o;
    o.exterior = f;
    auto r = fourier_halflap(s, o);
    const std::size_t N = s.values.size(), mid = N / 2;
    CHECK(s.node(mid) == 0.0);
    // regression reference: (1/pi) int (1 - e^{-y^2}) / y^2 dy = 2 / sqrt(pi)
    CHECK(std::fabs(r.values[mid] - 2.0 / std::sqrt(kPi)) <= 1e-10);
    CHECK(r.values[mid] > 0.0);
    for (std::size_t j = 1; j < N; j += 97) CHECK(std::fabs(r.values[j] - r.values[N - j]) <= 1e-12);
    for (double x : {-2.1, -0.4, 0.0, 0.9, 3.3}) {
        const std::size_t j = static_cast<std::size_t>(std::llround((x + s.half_width) / s.spacing()));
        CHECK(std::fabs(r.values[j] - pv_halflap(line(f), s.node(j))) <= 1e-6);
    }
}

TEST_CASE("fourier on zero and the truncation flag") {
    auto z = sample_uniform([](double) { return 0.0; }, 4.0, 256);
    auto r = fourier_halflap(z);
    for (double v : r.values) CHECK(v == 0.0);
    CHECK_FALSE(r.truncated);
    auto wide = sample_uniform([](double x) { return 1.0 / (1.0 + x * x); }, 4.0, 256);
    CHECK(fourier_halflap(wide).truncated);
}

TEST_CASE("fourier on the bubble at L = 512") {
    auto s = sample_uniform(eta0, 512.0, 1u << 17);
    FourierOptions o;
    o.exterior = eta0;
    auto r = fourier_halflap(s, o);
    double err = 0.0;
    for (std::size_t j = 0; j < s.values.size(); ++j) {
        const double x = s.node(j);
        if (std::fabs(x) <= 10.0) err = std::max(err, std::fabs(r.values[j] - 2.0 / (1 + x * x)));
    }
    CHECK(err <= 1e-5);
}

TEST_CASE("evaluators agree on 20 random gaussian sums") {
    std::mt19937_64 g(99);
    std::uniform_real_distribution<double> X(-3.0, 3.0);
    for (int k = 0; k < 20; ++k) {
        GaussSum f = random_gauss_sum(g);
        auto s = sample_uniform(f, 64.0, 1u << 14);
        FourierOptions o;
        o.exterior = f;
        auto r = fourier_halflap(s, o);
        UniformSamples rs{s.half_width, r.values};
        for (int p = 0; p < 10; ++p) {
            const double x = X(g);
            CHECK(std::fabs(interpolate_uniform(rs, x) - pv_halflap(line(f), x)) <= 1e-5);
        }
    }
}

TEST_CASE("evenness of both evaluators") {
    GaussSum f{{1.0, 0.4, 0.4}, {0.0, -1.1, 1.1}, {0.5, 0.3, 0.3}};
    for (double x : {0.2, 0.77, 1.5, 2.9}) CHECK(std::fabs(pv_halflap(line(f), x) - pv_halflap(line(f), -x)) <= 1e-12);
    auto s = sample_uniform(f, 64.0, 1u << 14);
    auto r = fourier_halflap(s);
    const std::size_t N = s.values.size();
    double worst = 0.0;
    for (std::size_t j = 1; j < N; ++j) worst = std::max(worst, std::fabs(r.values[j] - r.values[N - j]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("scaling covariance") {
    auto u = [](double x) { return std::exp(-x * x) * (1.0 + 0.3 * x); };
    for (double lambda : {0.5, 2.5}) {
        auto ul = [&](double x) { return u(lambda * x); };
        for (double x : {-0.8, 0.0, 0.3, 1.7})
            CHECK(std::fabs(pv_halflap(line(ul), x) - lambda * pv_halflap(line(u), lambda * x)) <= 1e-6);
    }
}

TEST_CASE("residual check examples") {
    const auto& d = hlmf::test::disc256();
    Field zero = zero_field(d);
    CHECK(residual_check(zero, 0.0) == 0.0);
    CHECK(std::fabs(residual_check(zero, kPi) - kPi / 2) <= 1e-14);
    const auto& r = hlmf::test::solution_pi();
    REQUIRE(r.converged);
    CHECK(residual_check(r.u, kPi) <= 1e-5);
    // strong-form certification of the fixed point: 50 tol + 1e-6 floor
    CHECK(residual_check(r.u, kPi) <= 50 * SolveConfig{}.tol + 1e-6);
}
}
