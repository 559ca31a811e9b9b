#include "hlmf/halflap.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <set>

#include "hlmf/errors.hpp"
#include "hlmf/green.hpp"
#include "hlmf/legendre.hpp"
#include "hlmf/parallel.hpp"
#include "hlmf/simd.hpp"

namespace hlmf {
namespace {

constexpr double kInvPi = 1.0 / std::numbers::pi;
constexpr double kFarReach = 1e12;

// int_A^B g on Gauss points
template <class G>
double gauss_piece(const Rule& r, double A, double B, G&& g) {
    const double c = 0.5 * (A + B), h = 0.5 * (B - A);
    double s = 0.0;
    for (std::size_t q = 0; q < r.x.size(); ++q) s += r.w[q] * g(c + h * r.x[q]);
    return h * s;
}

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// FFTW plans are created under a lock; execution of distinct plans is safe.
struct RealFft {
    std::size_t n;
    double* in;
    fftw_complex* out;
    fftw_plan fwd, bwd;
    explicit RealFft(std::size_t n_) : n(n_) {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        in = fftw_alloc_real(n);
        out = fftw_alloc_complex(n / 2 + 1);
        fwd = fftw_plan_dft_r2c_1d(int(n), in, out, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(int(n), out, in, FFTW_ESTIMATE);
    }
    ~RealFft() {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(in);
        fftw_free(out);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::vector<std::complex<double>> forward(const std::vector<double>& v) {
        std::copy(v.begin(), v.end(), in);
        std::fill(in + v.size(), in + n, 0.0);
        fftw_execute(fwd);
        std::vector<std::complex<double>> r(n / 2 + 1);
        for (std::size_t k = 0; k <= n / 2; ++k) r[k] = {out[k][0], out[k][1]};
        return r;
    }
    std::vector<double> backward(const std::vector<std::complex<double>>& c) {
        for (std::size_t k = 0; k <= n / 2; ++k) {
            out[k][0] = c[k].real();
            out[k][1] = c[k].imag();
        }
        fftw_execute(bwd);
        std::vector<double> r(in, in + n);
        for (double& x : r) x /= double(n);
        return r;
    }
};

// 1/s^2 - a^2 / sin^2(a s), smooth through s = 0
double periodic_defect(double s, double a) {
    const double z = a * s;
    if (std::fabs(z) < 1e-2) {
        const double a2 = a * a, z2 = z * z;
        return -a2 * (1.0 / 3.0 + z2 / 15.0 + 2.0 * z2 * z2 / 189.0);
    }
    const double sn = std::sin(z);
    return 1.0 / (s * s) - a * a / (sn * sn);
}

// int over s in [d, inf) of (f0 - g(side * s)) / s^2 where g is evaluated at
// the absolute abscissa x + side * s
double exterior_tail(const std::function<double(double)>& ext, double x, double edge, int side, double f0) {
    const Rule& r = gauss_legendre(8);
    // the sample at -L doubles as the image of +L; keep away from s = 0
    const double d = std::max(std::fabs(edge - x), 1e-3 * std::fabs(edge));
    double total = 0.0, A = d, len = d;
    while (A < kFarReach) {
        const double B = A + len;
        total += gauss_piece(r, A, B, [&](double s) { return (f0 - ext(x + side * s)) / (s * s); });
        A = B;
        len *= 2.0;
    }
    total += (f0 - ext(x + side * A)) / A;
    return total;
}

}  // namespace

double pv_halflap(const LineFunction& u, double x, const PvOptions& opt) {
    require(static_cast<bool>(u.f), "pv_halflap: empty function");
    require(opt.delta > 0.0, "pv_halflap: delta must be positive");
    const bool lo_finite = std::isfinite(u.lo), hi_finite = std::isfinite(u.hi);
    if ((lo_finite && x - u.lo < opt.boundary_margin) || (hi_finite && u.hi - x < opt.boundary_margin))
        throw BoundaryEvaluationError("pv_halflap: x too close to the edge of the support");
    double delta = opt.delta;
    if (lo_finite) delta = std::min(delta, 0.5 * (x - u.lo));
    if (hi_finite) delta = std::min(delta, 0.5 * (u.hi - x));
    const Rule& r = gauss_legendre(opt.order);
    const double fx = u.f(x);
    auto F = [&](double y) { return (y < u.lo || y > u.hi) ? 0.0 : u.f(y); };

    // near field: symmetric pairing removes the odd u' term exactly
    std::set<double> ss{0.0, delta};
    for (double b : u.breaks) {
        double s = std::fabs(b - x);
        // tiny pieces at s -> 0 only add cancellation in the pairing
        if (s >= opt.min_piece && s < delta) ss.insert(s);
    }
    double total = 0.0;
    for (auto it = ss.begin(), nx = std::next(it); nx != ss.end(); ++it, ++nx)
        total += gauss_piece(r, *it, *nx, [&](double s) { return (2.0 * fx - F(x + s) - F(x - s)) / (s * s); });

    // far field, one side at a time
    auto far_side = [&](int side) {
        const double end = side > 0 ? u.hi : u.lo;
        const double reach = std::isfinite(end) ? std::fabs(end - x) : kFarReach;
        std::set<double> pts{delta, reach};
        for (double s = 2.0 * delta; s < reach; s *= 2.0) pts.insert(s);
        for (double b : u.breaks) {
            double s = side * (b - x);
            if (s > delta && s < reach) pts.insert(s);
        }
        double acc = 0.0;
        for (auto it = pts.begin(), nx = std::next(it); nx != pts.end(); ++it, ++nx)
            acc += gauss_piece(r, *it, *nx, [&](double s) { return (fx - F(x + side * s)) / (s * s); });
        // beyond the support u = 0; beyond kFarReach u is frozen at its last value
        acc += std::isfinite(end) ? fx / reach : (fx - F(x + side * reach)) / reach;
        return acc;
    };
    total += far_side(+1) + far_side(-1);
    return kInvPi * total;
}

double pv_halflap(const Field& u, double x, PvOptions opt) {
    LineFunction lf;
    lf.f = [&u](double y) { return u.smooth(y); };
    lf.lo = -1.0;
    lf.hi = 1.0;
    lf.breaks = u.grid().breakpoints();
    opt.delta = std::max(4.0 * u.grid().spacing_at(x), 1e-3);
    return pv_halflap(lf, x, opt);
}

UniformSamples sample_uniform(const std::function<double(double)>& f, double L, std::size_t N) {
    require(L > 0.0 && N >= 2, "sample_uniform: L > 0 and N >= 2");
    UniformSamples s;
    s.half_width = L;
    s.values.resize(N);
    for (std::size_t j = 0; j < N; ++j) s.values[j] = f(s.node(j));
    return s;
}

FourierResult fourier_halflap(const UniformSamples& u, const FourierOptions& opt) {
    const std::size_t N = u.values.size();
    require(N >= 4 && (N & (N - 1)) == 0, "fourier_halflap: sample count must be a power of two");
    require(u.half_width > 0.0, "fourier_halflap: L must be positive");
    const double L = u.half_width, h = u.spacing();
    FourierResult res;
    res.valid_half_width = 0.5 * L;
    const double vmax = simd::kernels().max_abs(u.values.data(), N);
    res.truncated = std::max(std::fabs(u.values.front()), std::fabs(u.values.back())) >
                    opt.truncation_threshold * vmax;

    {
        RealFft fft(N);
        auto c = fft.forward(u.values);
        const double dxi = std::numbers::pi / L;
        for (std::size_t k = 0; k <= N / 2; ++k) c[k] *= dxi * double(k);
        res.values = fft.backward(c);
    }
    if (!opt.free_space) return res;

    // (1/pi) int_{-L}^{L} (f(x)-f(y)) D(x-y) dy by the trapezoid rule, as a
    // linear convolution of length 2N
    const double a = std::numbers::pi / (2.0 * L);
    const std::size_t M = 2 * N;
    std::vector<double> ker(M, 0.0), q(M, 0.0), om(M, 0.0);
    for (std::size_t m = 0; m < N; ++m) {
        const double d = h * periodic_defect(double(m) * h, a);
        ker[m] = d;
        if (m > 0) ker[M - m] = d;
    }
    for (std::size_t j = 0; j < N; ++j) {
        const double w = j == 0 ? 0.5 : 1.0;
        q[j] = w * u.values[j];
        om[j] = w;
    }
    RealFft big(M);
    const auto kh = big.forward(ker);
    auto qh = big.forward(q);
    auto oh = big.forward(om);
    for (std::size_t k = 0; k <= M / 2; ++k) {
        qh[k] *= kh[k];
        oh[k] *= kh[k];
    }
    const auto conv_q = big.backward(qh);
    const auto conv_w = big.backward(oh);

    std::vector<double> corr(N);
    parallel_for(N, [&](std::size_t i) {
        const double xi = u.node(i), fi = u.values[i];
        // right end y = L carries the periodic image of the sample at -L
        double c = fi * conv_w[i] - conv_q[i] + 0.5 * h * (fi - u.values[0]) * periodic_defect(xi - L, a);
        double tail;
        if (opt.exterior) {
            tail = exterior_tail(opt.exterior, xi, L, +1, fi) + exterior_tail(opt.exterior, xi, -L, -1, fi);
        } else {
            tail = fi * (1.0 / (L - xi) + 1.0 / std::max(L + xi, 0.5 * h));
        }
        corr[i] = kInvPi * (c + tail);
    });
    for (std::size_t i = 0; i < N; ++i) res.values[i] += corr[i];
    return res;
}

double interpolate_uniform(const UniformSamples& s, double x, std::size_t points) {
    const std::size_t N = s.values.size();
    require(points >= 2 && points <= N, "interpolate_uniform: bad stencil");
    const double h = s.spacing();
    const double t = (x + s.half_width) / h;
    long start = static_cast<long>(std::floor(t)) - long(points / 2) + 1;
    start = std::clamp(start, 0L, long(N - points));
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
        const long j = start + long(k);
        const double d = t - double(j);
        if (d == 0.0) return s.values[std::size_t(j)];
        // equispaced barycentric weights (-1)^k C(points-1, k)
        double w = 1.0;
        for (std::size_t m = 0; m < k; ++m) w *= double(points - 1 - m) / double(m + 1);
        if (k % 2) w = -w;
        num += w / d * s.values[std::size_t(j)];
        den += w / d;
    }
    return num / den;
}

ResidualReport residual_report(const Field& u, double rho, std::size_t points) {
    require(points >= 2, "residual_report: need at least two check points");
    const Grid& g = u.grid();
    std::vector<double> e(g.n);
    for (std::size_t i = 0; i < g.n; ++i) e[i] = std::exp(u.values()[i]);
    const double Z = integrate(g, e);
    std::vector<double> res(points), rhs(points), xs(points);
    for (std::size_t k = 0; k < points; ++k) xs[k] = -0.95 + 1.9 * double(k) / double(points - 1);
    parallel_for(points, [&](std::size_t k) {
        const double x = xs[k];
        rhs[k] = rho * std::exp(u.smooth(x)) / Z;
        res[k] = std::fabs(pv_halflap(u, x) - rhs[k]);
    });
    ResidualReport rep;
    for (std::size_t k = 0; k < points; ++k) {
        if (res[k] > rep.max_abs) {
            rep.max_abs = res[k];
            rep.at = xs[k];
        }
        rep.max_rhs = std::max(rep.max_rhs, rhs[k]);
    }
    return rep;
}

double residual_check(const Field& u, double rho) { return residual_report(u, rho).max_abs; }

WeakDeltaResult weak_delta_test(double x, const std::function<double(double)>& phi, const WeakDeltaOptions& opt) {
    require(std::fabs(x) < 1.0, "weak_delta_test: x must lie in I");
    require(opt.panel_width > 0.0 && opt.panel_width <= 0.5, "weak_delta_test: panel width in (0, 0.5]");
    const UniformSamples s = sample_uniform(phi, opt.box_half_width, opt.samples);
    const FourierResult fr = fourier_halflap(s);
    UniformSamples psi{s.half_width, fr.values};

    const std::size_t P = static_cast<std::size_t>(std::ceil(1.0 / opt.panel_width));
    std::vector<double> br(P + 1);
    for (std::size_t k = 0; k <= P; ++k) br[k] = double(k) / double(P);
    br.back() = 1.0;
    GreenOperator op(build_composite_grid(br));
    const Grid& g = op.grid();
    std::vector<double> pv(g.n);
    for (std::size_t j = 0; j < g.n; ++j) pv[j] = interpolate_uniform(psi, g.nodes[j]);

    WeakDeltaResult r;
    r.value = op.apply_at(x, pv);
    r.phi_at_x = phi(x);
    r.truncated = fr.truncated;
    return r;
}

}  // namespace hlmf
