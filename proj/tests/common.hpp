#pragma once
// Shared helpers for the unit tests.

#include <cmath>
#include <numbers>
#include <random>

#include "hlmf/io.hpp"
#include "hlmf/solver.hpp"

namespace hlmf::test {

inline const Constants& constants() {
    static const Constants c = load_constants(default_constants_path());
    return c;
}

inline DiscretizationPtr disc(std::size_t n = 256, GridKind kind = GridKind::graded_composite) {
    return Discretization::build(build_grid(n, kind));
}

inline const DiscretizationPtr& disc256() {
    static const DiscretizationPtr d = disc(256);
    return d;
}

// Converged solution at rho = pi on the default grid, computed once.
inline const SolveResult& solution_pi() {
    static const SolveResult r = solve(std::numbers::pi, zero_field(disc256()), SolveConfig{}, disc256());
    return r;
}

inline double eta0(double x) { return std::log(2.0 / (1.0 + x * x)); }

}  // namespace hlmf::test
