#pragma once
// Two independent evaluators of (-Delta)^{1/2}: principal-value quadrature
// and the Fourier multiplier |xi|.

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "hlmf/grid.hpp"

namespace hlmf {

// A function on the real line, zero outside [lo, hi] (either may be
// infinite), smooth between the listed breakpoints.
struct LineFunction {
    std::function<double(double)> f;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    std::vector<double> breaks;
};

struct PvOptions {
    double delta = 0.25;           // near-field radius; grids override with 4 spacings
    double boundary_margin = 0.01; // minimal distance from the support edge
    std::size_t order = 20;        // Gauss points per piece
    double min_piece = 1e-4;       // near-field breakpoints closer to x are ignored
};

// (1/pi) PV int (u(x) - u(y)) / (x - y)^2 dy
double pv_halflap(const LineFunction& u, double x, const PvOptions& opt = {});
// Field on I with exterior 0; delta = 4 local spacings, at least 1e-3.
double pv_halflap(const Field& u, double x, PvOptions opt = {});

struct UniformSamples {
    double half_width = 0.0;     // L; nodes x_j = -L + j h, h = 2L/N
    std::vector<double> values;
    double spacing() const { return 2.0 * half_width / double(values.size()); }
    double node(std::size_t j) const { return -half_width + double(j) * spacing(); }
};

UniformSamples sample_uniform(const std::function<double(double)>& f, double L, std::size_t N);

struct FourierOptions {
    // values outside [-L, L]; zero when empty
    std::function<double(double)> exterior;
    // add the exact free-space correction to the periodic multiplier
    bool free_space = true;
    double truncation_threshold = 1e-8;
};

struct FourierResult {
    std::vector<double> values;
    bool truncated = false;          // boundary samples above threshold * max
    double valid_half_width = 0.0;   // results trusted on |x| <= L/2
};

FourierResult fourier_halflap(const UniformSamples& u, const FourierOptions& opt = {});

// Local Lagrange interpolation of uniform samples.
double interpolate_uniform(const UniformSamples& s, double x, std::size_t points = 12);

struct ResidualReport {
    double max_abs = 0.0;
    double max_rhs = 0.0;
    double at = 0.0;
    double relative() const { return max_abs / std::max(1.0, max_rhs); }
};

// sup over check points |x| <= 0.95 of |pv(u)(x) - rho e^{u(x)} / int_I e^u|
double residual_check(const Field& u, double rho);
ResidualReport residual_report(const Field& u, double rho, std::size_t points = 41);

}  // namespace hlmf
