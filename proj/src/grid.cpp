#include "hlmf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hlmf/errors.hpp"
#include "hlmf/legendre.hpp"
#include "hlmf/simd.hpp"

namespace hlmf {
namespace {

constexpr std::size_t kPanelOrder = 8;

void fill_barycentric(Grid& g) {
    g.bary.assign(g.n, 0.0);
    for (const Panel& p : g.panels) {
        if (g.kind == GridKind::chebyshev_lobatto) {
            for (std::size_t j = 0; j < p.count; ++j) {
                double s = (j % 2 == 0) ? 1.0 : -1.0;
                if (j == 0 || j + 1 == p.count) s *= 0.5;
                g.bary[p.first + j] = s;
            }
            continue;
        }
        for (std::size_t j = 0; j < p.count; ++j) {
            double prod = 1.0;
            const double xj = g.nodes[p.first + j];
            for (std::size_t k = 0; k < p.count; ++k)
                if (k != j) prod *= (xj - g.nodes[p.first + k]) / (p.b - p.a);
            g.bary[p.first + j] = 1.0 / prod;
        }
    }
}

GridPtr chebyshev_grid(std::size_t n) {
    auto g = std::make_shared<Grid>();
    g->kind = GridKind::chebyshev_lobatto;
    g->n = n;
    g->grading = 1.0;
    g->nodes.resize(n);
    g->weights.resize(n);
    const std::size_t N = n - 1;
    for (std::size_t j = 0; j < n; ++j) {
        // sin form keeps the set exactly symmetric
        g->nodes[j] = std::sin(std::numbers::pi * (2.0 * double(j) - double(N)) / (2.0 * double(N)));
    }
    g->nodes[0] = -1.0;
    g->nodes[N] = 1.0;
    // Clenshaw-Curtis weights
    for (std::size_t j = 0; j <= N; ++j) {
        // accumulate in reverse cosine order for a symmetric sum
        double s = 0.0;
        for (std::size_t k = N / 2; k >= 1; --k) {
            double b = (2 * k == N) ? 1.0 : 2.0;
            s += b / (4.0 * double(k) * double(k) - 1.0) *
                 std::cos(2.0 * std::numbers::pi * double(j) * double(k) / double(N));
        }
        double c = (j == 0 || j == N) ? 1.0 : 2.0;
        // Theta_j measured from x = -1
        g->weights[j] = c / double(N) * (1.0 - s);
    }
    for (std::size_t j = 0; j < n / 2; ++j) {
        double w = 0.5 * (g->weights[j] + g->weights[N - j]);
        g->weights[j] = g->weights[N - j] = w;
    }
    g->panels.push_back(Panel{-1.0, 1.0, 0, n});
    fill_barycentric(*g);
    return g;
}

}  // namespace

std::string to_string(GridKind kind) {
    return kind == GridKind::chebyshev_lobatto ? "chebyshev_lobatto" : "graded_composite";
}

GridKind grid_kind_from_string(const std::string& s) {
    if (s == "chebyshev_lobatto") return GridKind::chebyshev_lobatto;
    if (s == "graded_composite") return GridKind::graded_composite;
    throw InvalidArgument("unknown grid kind '" + s + "'");
}

GridPtr build_composite_grid(const std::vector<double>& half_breaks, std::size_t order) {
    require(half_breaks.size() >= 2 && half_breaks.front() == 0.0 && half_breaks.back() == 1.0,
            "composite grid: breakpoints must run from 0 to 1");
    for (std::size_t i = 1; i < half_breaks.size(); ++i)
        require(half_breaks[i] > half_breaks[i - 1], "composite grid: breakpoints must increase");
    const Rule& r = radau_right(order);
    const std::size_t P = half_breaks.size() - 1;
    auto g = std::make_shared<Grid>();
    g->kind = GridKind::graded_composite;
    g->n = 2 * P * order;
    std::vector<double> xr, wr;
    xr.reserve(P * order);
    wr.reserve(P * order);
    for (std::size_t p = 0; p < P; ++p) {
        const double a = half_breaks[p], b = half_breaks[p + 1], h = b - a;
        for (std::size_t k = 0; k < order; ++k) {
            // outer endpoint bit-exact
            xr.push_back(k + 1 == order ? b : a + h * (r.x[k] + 1.0) * 0.5);
            wr.push_back(h * 0.5 * r.w[k]);
        }
    }
    g->nodes.resize(g->n);
    g->weights.resize(g->n);
    const std::size_t half = P * order;
    for (std::size_t i = 0; i < half; ++i) {
        g->nodes[half + i] = xr[i];
        g->weights[half + i] = wr[i];
        g->nodes[half - 1 - i] = -xr[i];
        g->weights[half - 1 - i] = wr[i];
    }
    for (std::size_t p = 0; p < P; ++p) {
        const std::size_t q = P - 1 - p;
        g->panels.push_back(Panel{-half_breaks[q + 1], -half_breaks[q], p * order, order});
    }
    for (std::size_t p = 0; p < P; ++p)
        g->panels.push_back(Panel{half_breaks[p], half_breaks[p + 1], half + p * order, order});
    fill_barycentric(*g);
    return g;
}

GridPtr build_grid(std::size_t n, GridKind kind, double grading) {
    require(n >= 8 && n % 2 == 0, "build_grid: n must be even and >= 8");
    if (kind == GridKind::chebyshev_lobatto) return chebyshev_grid(n);
    require(n % (2 * kPanelOrder) == 0 && n >= 4 * kPanelOrder,
            "build_grid: graded_composite needs n a multiple of 16 and n >= 32");
    require(grading > 0.0 && grading < 1.0, "build_grid: grading must lie in (0,1)");
    const std::size_t P = n / (2 * kPanelOrder);
    const std::size_t center = P / 2, edge = P - center;
    std::vector<double> br{0.0};
    for (std::size_t k = center; k-- > 0;) br.push_back(0.5 * std::pow(grading, double(k)));
    for (std::size_t k = 1; k < edge; ++k) br.push_back(1.0 - 0.5 * std::pow(grading, double(k)));
    br.push_back(1.0);
    // center = 0 happens only for P = 1, excluded above
    auto g = build_composite_grid(br, kPanelOrder);
    auto out = std::make_shared<Grid>(*g);
    out->grading = grading;
    return out;
}

std::size_t Grid::panel_of(double x) const {
    if (panels.size() == 1) return 0;
    // panels are ordered left to right and tile [-1,1]
    auto it = std::lower_bound(panels.begin(), panels.end(), x,
                               [](const Panel& p, double v) { return p.b < v; });
    if (it == panels.end()) return panels.size() - 1;
    std::size_t idx = static_cast<std::size_t>(it - panels.begin());
    // x on a shared breakpoint: prefer the panel that owns it as a node
    if (x == it->b && idx + 1 < panels.size() && x < 0.0) return idx + 1;
    if (x == 0.0 && idx + 1 < panels.size()) return idx + 1;
    return idx;
}

std::vector<double> Grid::breakpoints() const {
    std::vector<double> br;
    br.reserve(panels.size() + 1);
    for (const Panel& p : panels) br.push_back(p.a);
    br.push_back(panels.back().b);
    return br;
}

double Grid::spacing_at(double x) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
    std::size_t j = static_cast<std::size_t>(it - nodes.begin());
    std::size_t hi = std::min(j, n - 1), lo = j == 0 ? 0 : j - 1;
    if (hi == lo) hi = std::min(lo + 1, n - 1);
    return nodes[hi] - nodes[lo];
}

std::size_t Grid::node_index(double x) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
    if (it != nodes.end() && *it == x) return static_cast<std::size_t>(it - nodes.begin());
    return npos;
}

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    require(grid_ != nullptr, "Field: null grid");
    require(values_.size() == grid_->n, "Field: value count does not match grid");
}

double Field::operator()(double x) const {
    if (!(std::fabs(x) < 1.0)) return 0.0;
    if (eval_) {
        std::size_t j = grid_->node_index(x);
        if (j != Grid::npos) return values_[j];
        return eval_(x);
    }
    return interpolate(*this, x);
}

double Field::smooth(double x) const {
    if (!(std::fabs(x) < 1.0)) return 0.0;
    return eval_ ? eval_(x) : interpolate(*this, x);
}

double integrate(const Grid& grid, std::span<const double> values) {
    require(values.size() == grid.n, "integrate: length mismatch");
    return simd::kernels().dot(grid.weights.data(), values.data(), grid.n);
}

double integrate(const Field& f) { return integrate(f.grid(), f.values()); }

double log_moment(double a, double b, double x) {
    require(a < b, "log_moment: a < b");
    // antiderivative of -log|s| is s(1 - log|s|), continuous through s = 0
    auto F = [](double s) { return s == 0.0 ? 0.0 : s * (1.0 - std::log(std::fabs(s))); };
    return F(b - x) - F(a - x);
}

double interpolate(const Field& f, double x) {
    if (!(std::fabs(x) < 1.0)) {
        // the nodes +-1 carry the boundary value, which is 0 for solutions
        if (std::fabs(x) == 1.0) return f.values()[x < 0 ? 0 : f.size() - 1];
        return 0.0;
    }
    const Grid& g = f.grid();
    const Panel& p = g.panels[g.panel_of(x)];
    const double* xs = g.nodes.data() + p.first;
    const double* bw = g.bary.data() + p.first;
    const double* v = f.values().data() + p.first;
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < p.count; ++j) {
        double d = x - xs[j];
        if (d == 0.0) return v[j];
        double t = bw[j] / d;
        num += t * v[j];
        den += t;
    }
    return num / den;
}

double interpolate_derivative(const Field& f, double x) {
    if (!(std::fabs(x) <= 1.0)) return 0.0;
    const Grid& g = f.grid();
    const Panel& p = g.panels[g.panel_of(x)];
    const double* xs = g.nodes.data() + p.first;
    const double* bw = g.bary.data() + p.first;
    const double* v = f.values().data() + p.first;
    for (std::size_t i = 0; i < p.count; ++i) {
        if (x == xs[i]) {
            // row of the differentiation matrix
            double s = 0.0;
            for (std::size_t j = 0; j < p.count; ++j)
                if (j != i) s += (bw[j] / bw[i]) * (v[j] - v[i]) / (xs[i] - xs[j]);
            return s;
        }
    }
    double px = 0.0, num = 0.0, den = 0.0;
    {
        double n0 = 0.0, d0 = 0.0;
        for (std::size_t j = 0; j < p.count; ++j) {
            double t = bw[j] / (x - xs[j]);
            n0 += t * v[j];
            d0 += t;
        }
        px = n0 / d0;
    }
    for (std::size_t j = 0; j < p.count; ++j) {
        double d = x - xs[j];
        double t = bw[j] / d;
        num += t * (px - v[j]) / d;
        den += t;
    }
    return num / den;
}

}  // namespace hlmf
