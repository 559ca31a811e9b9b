#pragma once
// Green function of (-Delta)^{1/2} on I = (-1,1) with exterior Dirichlet
// condition, G_x(y) = -(1/pi) log|x - y| + H(x, y), and its discretization.

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "hlmf/grid.hpp"

namespace hlmf {

double green(double x, double y);
double regular_part(double x, double y);
// x d/dx H(x, y)
double pohozaev_kernel(double x, double y);

namespace detail {
// H without range checks; valid for |x|, |y| <= 1 away from x = y = +-1.
double regular_part_raw(double x, double y);
}  // namespace detail

// Product-integration weights W_j(x) with
//   sum_j W_j(x) f(y_j) ~ int_I G_x(y) f(y) dy
// for any x, using the panel interpolant of f. Immutable after construction.
class GreenOperator {
public:
    explicit GreenOperator(GridPtr grid);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }

    void row_weights(double x, std::span<double> out) const;
    double apply_at(double x, std::span<const double> f) const;

private:
    struct PanelData {
        std::vector<double> vinv;     // count x count, vinv[k*count + j] = Legendre coeff k of l_j
        std::vector<double> far_log;  // Gauss points x count, weight folded in
        std::vector<double> far_y;
        std::vector<double> edge_h;   // substitution points x count for the H part
        std::vector<double> edge_y;
    };
    GridPtr grid_;
    std::vector<PanelData> data_;
};

using GreenOperatorPtr = std::shared_ptr<const GreenOperator>;

struct KernelMatrix {
    GridPtr grid;
    std::size_t n = 0;
    std::vector<double> entries;  // row-major

    double operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
    void apply(std::span<const double> f, std::span<double> out) const;
    std::vector<double> apply(std::span<const double> f) const;
};

// Rows are computed independently (parallel over rows); the per-row
// arithmetic is fixed so the result does not depend on the thread count.
KernelMatrix assemble_green_matrix(const GreenOperator& op);
KernelMatrix assemble_green_matrix(GridPtr grid);

struct WeakDeltaOptions {
    double box_half_width = 16.0;        // Fourier box [-L, L)
    std::size_t samples = 1u << 15;      // power of two
    double panel_width = 0.01;           // integration grid against G_x
};

struct WeakDeltaResult {
    double value = 0.0;      // int_I G_x (-Delta)^{1/2} phi
    double phi_at_x = 0.0;
    bool truncated = false;  // phi not decayed inside the box
};

// Checks (-Delta)^{1/2} G_x = delta_x weakly: returns int_I G_x(y) psi(y) dy
// with psi = (-Delta)^{1/2} phi from the Fourier evaluator. phi should be
// negligible outside I.
WeakDeltaResult weak_delta_test(double x, const std::function<double(double)>& phi,
                                const WeakDeltaOptions& opt = {});

}  // namespace hlmf
