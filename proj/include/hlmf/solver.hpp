#pragma once
// Fixed-point operator T_rho(u) = rho K[e^u] / int_I e^u, Picard and Newton
// solvers, and continuation in rho.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "hlmf/green.hpp"
#include "hlmf/grid.hpp"

namespace hlmf {

// Grid, product-integration operator and assembled matrix, shared by all
// solves on the same grid.
struct Discretization {
    GridPtr grid;
    GreenOperatorPtr op;
    std::shared_ptr<const KernelMatrix> K;

    static std::shared_ptr<const Discretization> build(GridPtr grid);
};
using DiscretizationPtr = std::shared_ptr<const Discretization>;

enum class Method { automatic, picard, newton };
std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct SolveConfig {
    std::size_t max_iter = 500;
    double tol = 1e-10;
    double damping = 1.0;
    Method method = Method::automatic;
    double picard_rho_max = 4.0;   // automatic: Picard up to here, Newton above
    // accept only if the strong residual <= certify_tol * max(1, max rhs);
    // <= 0 turns certification off
    double certify_tol = 1e-4;
    double u_max = 700.0;

    void validate() const;
};

enum class SolveStatus { converged, max_iterations, line_search_failed, overflow, singular_jacobian, not_certified };
std::string to_string(SolveStatus s);

struct IterationRecord {
    std::size_t iter = 0;
    double residual = 0.0;
    double step = 1.0;
};

struct SolveResult {
    Field u;
    double rho = 0.0;
    bool converged = false;
    SolveStatus status = SolveStatus::max_iterations;
    Method method = Method::picard;
    double fixed_point_residual = 0.0;
    double strong_residual = 0.0;
    double strong_residual_relative = 0.0;
    std::size_t iterations = 0;
    double u0_value = 0.0;
    double mass = 0.0;  // int_I e^u
    std::vector<IterationRecord> trace;
};

Field zero_field(const DiscretizationPtr& d);

// rho K[e^u] / int e^u; throws OverflowError when max u > u_max
Field apply_T(const Field& u, double rho, const KernelMatrix& K, double u_max = 700.0);
// DT_rho(u) v
std::vector<double> apply_DT(const Field& u, const std::vector<double>& v, double rho, const KernelMatrix& K);

// Attaches the Nystrom interpolant x -> rho/Z sum_j W_j(x) e^{u_j}.
void attach_nystrom(Field& u, double rho, const GreenOperatorPtr& op);

SolveResult picard_solve(double rho, const Field& u0, const SolveConfig& cfg, const DiscretizationPtr& d);
SolveResult newton_solve(double rho, const Field& u0, const SolveConfig& cfg, const DiscretizationPtr& d);
// Method per cfg.method (automatic splits at picard_rho_max).
SolveResult solve(double rho, const Field& u0, const SolveConfig& cfg, const DiscretizationPtr& d);

enum class Termination { reached_end, no_convergence, u0_exceeded_cap };
std::string to_string(Termination t);

struct BranchPoint {
    double rho = 0.0;
    SolveResult result;
};

struct Branch {
    std::vector<BranchPoint> points;
    Termination termination = Termination::no_convergence;
    std::size_t failed_attempts = 0;
    double last_attempted_rho = 0.0;
};

struct ContinuationOptions {
    double min_step = 1e-6;
    double u0_cap = 100.0;
};

Branch continue_branch(double rho_start, double rho_end, double initial_step, const SolveConfig& cfg,
                       const DiscretizationPtr& d, const ContinuationOptions& opt = {});

// Direct solve from zero; when that fails, continuation from min(0.5, rho).
SolveResult solve_from_rest(double rho, const SolveConfig& cfg, const DiscretizationPtr& d,
                            double step = 0.1, const ContinuationOptions& opt = {});

}  // namespace hlmf
