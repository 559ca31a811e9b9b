#include "hlmf/green.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "hlmf/errors.hpp"
#include "hlmf/halflap.hpp"
#include "hlmf/legendre.hpp"
#include "hlmf/parallel.hpp"
#include "hlmf/simd.hpp"

namespace hlmf {
namespace {

constexpr double kInvPi = 1.0 / std::numbers::pi;
constexpr double kNearTau = 1.2;   // exact moments inside this
constexpr double kFarTau = 12.0;   // node rule beyond this
constexpr std::size_t kFarGauss = 40;
constexpr std::size_t kEdgeGauss = 24;

}  // namespace

namespace detail {
double regular_part_raw(double x, double y) {
    return kInvPi * std::log(std::sqrt((1.0 - x * x) * (1.0 - y * y)) + 1.0 - x * y);
}
}  // namespace detail

double green(double x, double y) {
    require(std::fabs(x) < 1.0, "green: |x| < 1 required");
    if (std::fabs(y) >= 1.0) return 0.0;
    if (x == y) return std::numeric_limits<double>::infinity();
    return detail::regular_part_raw(x, y) - kInvPi * std::log(std::fabs(x - y));
}

double regular_part(double x, double y) {
    require(std::fabs(x) < 1.0 && std::fabs(y) < 1.0, "regular_part: arguments must lie in I");
    return detail::regular_part_raw(x, y);
}

double pohozaev_kernel(double x, double y) {
    require(std::fabs(x) < 1.0 && std::fabs(y) < 1.0, "pohozaev_kernel: arguments must lie in I");
    const double sx = std::sqrt(1.0 - x * x), sy = std::sqrt(1.0 - y * y);
    return x * kInvPi * (-y - x * sy / sx) / (sx * sy + 1.0 - x * y);
}

GreenOperator::GreenOperator(GridPtr grid) : grid_(std::move(grid)) {
    require(grid_ != nullptr, "GreenOperator: null grid");
    const Grid& g = *grid_;
    const Rule& gl = gauss_legendre(kFarGauss);
    data_.resize(g.panels.size());
    for (std::size_t p = 0; p < g.panels.size(); ++p) {
        const Panel& pn = g.panels[p];
        const std::size_t m = pn.count;
        const double h = pn.b - pn.a;
        PanelData& d = data_[p];
        Eigen::MatrixXd V(m, m);
        std::vector<double> P(m);
        for (std::size_t j = 0; j < m; ++j) {
            double t = (2.0 * g.nodes[pn.first + j] - pn.a - pn.b) / h;
            legendre_values(t, m, P.data());
            for (std::size_t k = 0; k < m; ++k) V(j, k) = P[k];
        }
        Eigen::MatrixXd Vi = V.partialPivLu().inverse();
        d.vinv.resize(m * m);
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t j = 0; j < m; ++j) d.vinv[k * m + j] = Vi(k, j);
        // l_j at reference points, from Legendre values
        auto lagrange_at = [&](double t, double* out) {
            legendre_values(t, m, P.data());
            for (std::size_t j = 0; j < m; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < m; ++k) s += d.vinv[k * m + j] * P[k];
                out[j] = s;
            }
        };
        d.far_log.resize(kFarGauss * m);
        d.far_y.resize(kFarGauss);
        for (std::size_t q = 0; q < kFarGauss; ++q) {
            d.far_y[q] = pn.a + h * (gl.x[q] + 1.0) * 0.5;
            lagrange_at(gl.x[q], d.far_log.data() + q * m);
            for (std::size_t j = 0; j < m; ++j) d.far_log[q * m + j] *= gl.w[q] * h * 0.5;
        }
        if (pn.touches_boundary()) {
            // y = sin(theta) makes sqrt(1 - y^2) smooth at the endpoint
            const std::size_t nq = std::max(kEdgeGauss, 2 * m);
            const Rule& ge = gauss_legendre(nq);
            const double ta = std::asin(pn.a), tb = std::asin(pn.b);
            d.edge_h.resize(nq * m);
            d.edge_y.resize(nq);
            for (std::size_t q = 0; q < nq; ++q) {
                double th = ta + (tb - ta) * (ge.x[q] + 1.0) * 0.5;
                double y = std::sin(th);
                d.edge_y[q] = y;
                lagrange_at((2.0 * y - pn.a - pn.b) / h, d.edge_h.data() + q * m);
                double wq = ge.w[q] * (tb - ta) * 0.5 * std::cos(th);
                for (std::size_t j = 0; j < m; ++j) d.edge_h[q * m + j] *= wq;
            }
        }
    }
}

void GreenOperator::row_weights(double x, std::span<double> out) const {
    const Grid& g = *grid_;
    require(out.size() == g.n, "row_weights: output size mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    if (!(std::fabs(x) < 1.0)) return;
    std::vector<double> M, wl;
    for (std::size_t p = 0; p < g.panels.size(); ++p) {
        const Panel& pn = g.panels[p];
        const PanelData& d = data_[p];
        const std::size_t m = pn.count;
        const double h = pn.b - pn.a;
        const double tau = (2.0 * x - pn.a - pn.b) / h;
        double* o = out.data() + pn.first;
        const double* ys = g.nodes.data() + pn.first;
        const double* ws = g.weights.data() + pn.first;
        const bool edge = pn.touches_boundary();
        const double at = std::fabs(tau);
        if (at > kFarTau && !edge) {
            for (std::size_t j = 0; j < m; ++j) {
                const double y = ys[j];
                const double num = std::sqrt((1.0 - x * x) * (1.0 - y * y)) + 1.0 - x * y;
                o[j] = ws[j] * kInvPi * std::log(num / std::fabs(x - y));
            }
            continue;
        }
        wl.assign(m, 0.0);
        if (at <= kNearTau) {
            M.resize(m);
            legendre_log_moments(tau, m, M.data());
            const double lh = std::log(0.5 * h);
            for (std::size_t j = 0; j < m; ++j) {
                double s = lh * 2.0 * d.vinv[j];
                for (std::size_t k = 0; k < m; ++k) s += d.vinv[k * m + j] * M[k];
                wl[j] = 0.5 * h * s;
            }
        } else if (at <= kFarTau) {
            for (std::size_t q = 0; q < kFarGauss; ++q) {
                const double lg = std::log(std::fabs(x - d.far_y[q]));
                const double* row = d.far_log.data() + q * m;
                for (std::size_t j = 0; j < m; ++j) wl[j] += lg * row[j];
            }
        } else {
            for (std::size_t j = 0; j < m; ++j) wl[j] = ws[j] * std::log(std::fabs(x - ys[j]));
        }
        for (std::size_t j = 0; j < m; ++j) o[j] = -kInvPi * wl[j];
        if (edge) {
            const std::size_t nq = d.edge_y.size();
            for (std::size_t q = 0; q < nq; ++q) {
                const double hv = detail::regular_part_raw(x, d.edge_y[q]);
                const double* row = d.edge_h.data() + q * m;
                for (std::size_t j = 0; j < m; ++j) o[j] += hv * row[j];
            }
        } else {
            for (std::size_t j = 0; j < m; ++j) o[j] += ws[j] * detail::regular_part_raw(x, ys[j]);
        }
    }
}

double GreenOperator::apply_at(double x, std::span<const double> f) const {
    require(f.size() == grid_->n, "apply_at: size mismatch");
    thread_local std::vector<double> w;
    w.resize(grid_->n);
    row_weights(x, w);
    return simd::kernels().dot(w.data(), f.data(), f.size());
}

void KernelMatrix::apply(std::span<const double> f, std::span<double> out) const {
    require(f.size() == n && out.size() == n, "KernelMatrix::apply: size mismatch");
    simd::kernels().gemv(entries.data(), n, n, f.data(), out.data());
}

std::vector<double> KernelMatrix::apply(std::span<const double> f) const {
    std::vector<double> out(n);
    apply(f, out);
    return out;
}

KernelMatrix assemble_green_matrix(const GreenOperator& op) {
    KernelMatrix K;
    K.grid = op.grid_ptr();
    K.n = op.grid().n;
    K.entries.assign(K.n * K.n, 0.0);
    const Grid& g = op.grid();
    parallel_for(K.n, [&](std::size_t i) {
        const double x = g.nodes[i];
        if (std::fabs(x) >= 1.0) return;  // G_{+-1} = 0
        op.row_weights(x, std::span<double>(K.entries.data() + i * K.n, K.n));
    });
    return K;
}

KernelMatrix assemble_green_matrix(GridPtr grid) { return assemble_green_matrix(GreenOperator(std::move(grid))); }

}  // namespace hlmf
