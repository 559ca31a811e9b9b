#include "hlmf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hlmf/errors.hpp"
#include "hlmf/green.hpp"
#include "hlmf/legendre.hpp"
#include "hlmf/parallel.hpp"

namespace hlmf {
namespace {

constexpr double kPi = std::numbers::pi;

double mass_of(const Field& u) {
    std::vector<double> e(u.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(u.values()[i]);
    return integrate(u.grid(), e);
}

// int_{-c}^{c} g on Gauss pieces split at grid breakpoints
template <class G>
double integrate_window(const Grid& grid, double c, G&& g) {
    const Rule& r = gauss_legendre(20);
    std::vector<double> pts{-c, c};
    for (double b : grid.breakpoints())
        if (b > -c && b < c) pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double A = pts[k], B = pts[k + 1], m = 0.5 * (A + B), h = 0.5 * (B - A);
        double acc = 0.0;
        for (std::size_t q = 0; q < r.x.size(); ++q) acc += r.w[q] * g(m + h * r.x[q]);
        s += h * acc;
    }
    return s;
}

}  // namespace

double pohozaev_double_integral(const Grid& grid, const std::function<double(double)>& f,
                                const std::function<double(double)>& g, std::size_t order) {
    // dx dy pohozaev_kernel = -(sin t cos p / pi) tan((t + p)/2) dt dp
    const Rule& r = gauss_legendre(order);
    std::vector<double> th, wt;
    const auto br = grid.breakpoints();
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        const double A = std::asin(br[k]), B = std::asin(br[k + 1]);
        for (std::size_t q = 0; q < r.x.size(); ++q) {
            th.push_back(0.5 * (A + B) + 0.5 * (B - A) * r.x[q]);
            wt.push_back(0.5 * (B - A) * r.w[q]);
        }
    }
    const std::size_t m = th.size();
    std::vector<double> fv(m), gv(m), sn(m), cs(m);
    for (std::size_t k = 0; k < m; ++k) {
        sn[k] = std::sin(th[k]);
        cs[k] = std::cos(th[k]);
        fv[k] = f(sn[k]);
        gv[k] = g(sn[k]);
    }
    std::vector<double> rows(m);
    parallel_for(m, [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += wt[j] * cs[j] * gv[j] * std::tan(0.5 * (th[i] + th[j]));
        rows[i] = -wt[i] * sn[i] * fv[i] * acc / kPi;
    });
    double s = 0.0;
    for (double v : rows) s += v;
    return s;
}

PohozaevReport pohozaev_audit(const Field& u, double rho) {
    require(rho > 0.0, "pohozaev_audit: rho must be positive");
    const SymmetryReport sym = symmetry_monotonicity(u);
    if (sym.evenness_defect > 1e-6) throw InvalidArgument("pohozaev_audit: solution is not even");
    PohozaevReport rep;
    rep.rho = rho;
    rep.mass = mass_of(u);
    const double alpha = std::log(rep.mass / rho);
    rep.uhat_at_1 = -alpha;  // u(1) = 0
    rep.I1 = 2.0 * std::exp(rep.uhat_at_1) - rho;
    {
        const Grid& g = u.grid();
        std::vector<double> v(g.n);
        for (std::size_t i = 0; i < g.n; ++i)
            v[i] = g.nodes[i] * interpolate_derivative(u, g.nodes[i]) * std::exp(u.values()[i] - alpha);
        rep.I1_direct = integrate(g, v);
        rep.I1_consistency = std::fabs(rep.I1_direct - rep.I1);
    }
    auto euh = [&](double x) { return std::exp(u.smooth(x) - alpha); };
    rep.I3 = pohozaev_double_integral(u.grid(), euh, euh);
    rep.inequality_margin = rep.I1 + rho * rho / (2.0 * kPi);
    rep.identity_residual = std::fabs(rep.inequality_margin - rep.I3);
    return rep;
}

BlowupProfile blowup_profile(const Field& u, double rho, double R, const BlowupOptions& opt) {
    require(rho > 0.0 && R > 0.0, "blowup_profile: rho and R must be positive");
    require(opt.samples >= 2, "blowup_profile: need at least two samples");
    BlowupProfile bp;
    bp.rho = rho;
    bp.R = R;
    const double mass = mass_of(u);
    bp.alpha = std::log(mass / rho);
    const double uhat0 = u.smooth(0.0) - bp.alpha;
    bp.r = 2.0 * std::exp(-uhat0);
    if (R * bp.r >= 1.0) {
        if (!opt.clip_to_domain) throw InvalidArgument("blowup_profile: R r >= 1, window exceeds the domain");
        bp.window_clipped = true;
    }
    bp.R_effective = bp.window_clipped ? 1.0 / bp.r : R;
    const double logr = std::log(bp.r);
    auto eta = [&](double x) { return u.smooth(bp.r * x) - bp.alpha + logr; };
    bp.eta_at_0 = uhat0 + logr;
    std::vector<double> err(opt.samples);
    parallel_for(opt.samples, [&](std::size_t k) {
        const double x = -bp.R_effective + 2.0 * bp.R_effective * double(k) / double(opt.samples - 1);
        err[k] = std::fabs(eta(x) - std::log(2.0 / (1.0 + x * x)));
    });
    bp.eta_error = *std::max_element(err.begin(), err.end());
    const double c = bp.R_effective * bp.r;
    // a window covering I holds the whole normalized mass; use the normalizing quadrature
    bp.mass_in_core = c >= 1.0 ? mass * std::exp(-bp.alpha)
                               : integrate_window(u.grid(), c, [&](double y) { return std::exp(u.smooth(y) - bp.alpha); });
    return bp;
}

double green_limit(const Field& u, double rho, double delta, std::size_t samples) {
    require(delta > 0.0 && delta < 1.0, "green_limit: 0 < delta < 1");
    require(rho > 0.0, "green_limit: rho must be positive");
    require(samples >= 2, "green_limit: need at least two samples");
    double m = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double x = delta + (1.0 - delta) * double(k) / double(samples - 1);
        for (double s : {x, -x}) {
            const double g = std::fabs(s) < 1.0 ? green(0.0, s) : 0.0;
            m = std::max(m, std::fabs(u.smooth(s) - 2.0 * kPi * g));
        }
    }
    return m;
}

SymmetryReport symmetry_monotonicity(const Field& u) {
    const Grid& g = u.grid();
    const auto& v = u.values();
    SymmetryReport s;
    for (std::size_t i = 0; i < g.n; ++i) s.evenness_defect = std::max(s.evenness_defect, std::fabs(v[i] - v[g.n - 1 - i]));
    // u(0) first, then the nodes of [0,1] in order
    double prev = u.smooth(0.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        if (g.nodes[i] < 0.0) continue;
        s.monotonicity_defect = std::max(s.monotonicity_defect, v[i] - prev);
        prev = v[i];
    }
    for (std::size_t i = 0; i < g.n; ++i)
        if (std::fabs(g.nodes[i]) < 1.0) s.positivity_defect = std::max(s.positivity_defect, -v[i]);
    return s;
}

}  // namespace hlmf
