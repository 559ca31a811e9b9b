#pragma once
// Audits of converged solutions: Pohozaev identity and inequality, blow-up
// profile, Green-function limit, symmetry and monotonicity.

#include <cstddef>
#include <functional>

#include "hlmf/grid.hpp"

namespace hlmf {

struct PohozaevReport {
    double rho = 0.0;
    double I1 = 0.0;            // 2 e^{uhat(1)} - rho
    double I1_direct = 0.0;     // int x uhat' e^{uhat} by panel differentiation
    double I1_consistency = 0.0;
    double I3 = 0.0;
    double identity_residual = 0.0;   // |I1 + rho^2/(2 pi) - I3|
    double inequality_margin = 0.0;   // I1 + rho^2/(2 pi)
    double uhat_at_1 = 0.0;
    double mass = 0.0;                // int_I e^u
};

struct BlowupOptions {
    std::size_t samples = 400;
    // restrict the window to the rescaled domain |x| <= 1/r instead of
    // rejecting R r >= 1
    bool clip_to_domain = false;
};

struct BlowupProfile {
    double rho = 0.0;
    double alpha = 0.0;
    double r = 0.0;
    double eta_at_0 = 0.0;
    double eta_error = 0.0;
    double R = 0.0;
    double R_effective = 0.0;
    bool window_clipped = false;
    double mass_in_core = 0.0;
};

struct SymmetryReport {
    double evenness_defect = 0.0;
    double monotonicity_defect = 0.0;
    double positivity_defect = 0.0;
};

PohozaevReport pohozaev_audit(const Field& u, double rho);
BlowupProfile blowup_profile(const Field& u, double rho, double R, const BlowupOptions& opt = {});
double green_limit(const Field& u, double rho, double delta, std::size_t samples = 400);
SymmetryReport symmetry_monotonicity(const Field& u);

// int over [-1,1]^2 of pohozaev_kernel(x,y) f(x) g(y) with the
// x = sin(theta), y = sin(phi) weighting, Gauss points on panels mapped from
// the grid breakpoints.
double pohozaev_double_integral(const Grid& grid, const std::function<double(double)>& f,
                                const std::function<double(double)>& g, std::size_t order = 16);

}  // namespace hlmf
