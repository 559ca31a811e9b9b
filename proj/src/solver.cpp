#include "hlmf/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "hlmf/errors.hpp"
#include "hlmf/halflap.hpp"
#include "hlmf/simd.hpp"

namespace hlmf {
namespace {

double snap(double rho) { return std::round(rho * 1e12) / 1e12; }

struct Eval {
    std::vector<double> e;   // e^u
    std::vector<double> Ke;
    double Z = 0.0;
};

Eval evaluate(const std::vector<double>& u, const KernelMatrix& K, double u_max) {
    const double um = *std::max_element(u.begin(), u.end());
    if (!(um <= u_max)) throw OverflowError("e^u overflow: max u exceeds the blow-up cap");
    Eval ev;
    ev.e.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) ev.e[i] = std::exp(u[i]);
    ev.Z = integrate(*K.grid, ev.e);
    ev.Ke = K.apply(ev.e);
    return ev;
}

// F = u - rho K e / Z
std::vector<double> residual_vector(const std::vector<double>& u, const Eval& ev, double rho) {
    std::vector<double> F(u);
    simd::kernels().axpby(-rho / ev.Z, ev.Ke.data(), 1.0, F.data(), F.size());
    return F;
}

void finish(SolveResult& r, const Field& u, double rho, const SolveConfig& cfg, const DiscretizationPtr& d) {
    r.u = u;
    r.rho = rho;
    attach_nystrom(r.u, rho, d->op);
    std::vector<double> e(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) e[i] = std::exp(u.values()[i]);
    r.mass = integrate(*d->grid, e);
    r.u0_value = r.u.smooth(0.0);
    if (r.status != SolveStatus::converged) {
        r.converged = false;
        return;
    }
    const ResidualReport rep = residual_report(r.u, rho);
    r.strong_residual = rep.max_abs;
    r.strong_residual_relative = rep.relative();
    if (cfg.certify_tol > 0.0 && rep.relative() > cfg.certify_tol) {
        r.status = SolveStatus::not_certified;
        r.converged = false;
        return;
    }
    r.converged = true;
}

}  // namespace

std::shared_ptr<const Discretization> Discretization::build(GridPtr grid) {
    auto d = std::make_shared<Discretization>();
    d->grid = grid;
    d->op = std::make_shared<GreenOperator>(grid);
    d->K = std::make_shared<KernelMatrix>(assemble_green_matrix(*d->op));
    return d;
}

std::string to_string(Method m) {
    switch (m) {
        case Method::picard: return "picard";
        case Method::newton: return "newton";
        default: return "auto";
    }
}

Method method_from_string(const std::string& s) {
    if (s == "auto" || s == "automatic") return Method::automatic;
    if (s == "picard") return Method::picard;
    if (s == "newton") return Method::newton;
    throw InvalidArgument("unknown solver method '" + s + "'");
}

void SolveConfig::validate() const {
    require(tol > 0.0, "SolveConfig: tol must be positive");
    require(damping > 0.0 && damping <= 1.0, "SolveConfig: damping must lie in (0,1]");
    require(max_iter >= 1, "SolveConfig: max_iter >= 1");
    require(u_max > 0.0, "SolveConfig: u_max must be positive");
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iterations: return "max_iterations";
        case SolveStatus::line_search_failed: return "line_search_failed";
        case SolveStatus::overflow: return "overflow";
        case SolveStatus::singular_jacobian: return "singular_jacobian";
        case SolveStatus::not_certified: return "not_certified";
    }
    return "unknown";
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::reached_end: return "reached_end";
        case Termination::no_convergence: return "no_convergence";
        case Termination::u0_exceeded_cap: return "u0_exceeded_cap";
    }
    return "unknown";
}

Field zero_field(const DiscretizationPtr& d) { return Field(d->grid, std::vector<double>(d->grid->n, 0.0)); }

Field apply_T(const Field& u, double rho, const KernelMatrix& K, double u_max) {
    require(rho > 0.0, "apply_T: rho must be positive");
    require(u.grid_ptr() == K.grid || u.size() == K.n, "apply_T: field and kernel grids differ");
    const Eval ev = evaluate(u.values(), K, u_max);
    std::vector<double> out(ev.Ke);
    for (double& v : out) v *= rho / ev.Z;
    return Field(K.grid, std::move(out));
}

std::vector<double> apply_DT(const Field& u, const std::vector<double>& v, double rho, const KernelMatrix& K) {
    require(v.size() == u.size(), "apply_DT: size mismatch");
    const Eval ev = evaluate(u.values(), K, 700.0);
    std::vector<double> ev_v(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) ev_v[i] = ev.e[i] * v[i];
    const double mv = integrate(*K.grid, ev_v);
    std::vector<double> out = K.apply(ev_v);
    simd::kernels().axpby(-rho * mv / (ev.Z * ev.Z), ev.Ke.data(), rho / ev.Z, out.data(), out.size());
    return out;
}

void attach_nystrom(Field& u, double rho, const GreenOperatorPtr& op) {
    std::vector<double> s(u.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::exp(u.values()[i]);
    const double Z = integrate(u.grid(), s);
    for (double& v : s) v *= rho / Z;
    u.set_evaluator([op, s = std::move(s)](double x) { return op->apply_at(x, s); });
}

SolveResult picard_solve(double rho, const Field& u0, const SolveConfig& cfg, const DiscretizationPtr& d) {
    cfg.validate();
    require(rho > 0.0, "picard_solve: rho must be positive");
    SolveResult r;
    r.method = Method::picard;
    std::vector<double> u = u0.values();
    const KernelMatrix& K = *d->K;
    try {
        for (std::size_t it = 0; it < cfg.max_iter; ++it) {
            const Eval ev = evaluate(u, K, cfg.u_max);
            std::vector<double> F = residual_vector(u, ev, rho);
            const double res = simd::kernels().max_abs(F.data(), F.size());
            r.trace.push_back({it, res, cfg.damping});
            r.iterations = it;
            r.fixed_point_residual = res;
            if (res <= cfg.tol) {
                r.status = SolveStatus::converged;
                break;
            }
            // u <- (1 - d) u + d T(u) = u - d F
            simd::kernels().axpby(-cfg.damping, F.data(), 1.0, u.data(), u.size());
        }
        if (r.status != SolveStatus::converged) {
            r.status = SolveStatus::max_iterations;
            r.iterations = cfg.max_iter;
        }
    } catch (const OverflowError&) {
        r.status = SolveStatus::overflow;
    }
    finish(r, Field(d->grid, u), rho, cfg, d);
    return r;
}

SolveResult newton_solve(double rho, const Field& u0, const SolveConfig& cfg, const DiscretizationPtr& d) {
    cfg.validate();
    require(rho > 0.0, "newton_solve: rho must be positive");
    SolveResult r;
    r.method = Method::newton;
    const KernelMatrix& K = *d->K;
    const Grid& g = *d->grid;
    const std::size_t n = g.n;
    const auto& kt = simd::kernels();
    std::vector<double> u = u0.values();
    r.status = SolveStatus::max_iterations;
    try {
        Eval ev = evaluate(u, K, cfg.u_max);
        std::vector<double> F = residual_vector(u, ev, rho);
        double res = kt.max_abs(F.data(), n);
        Eigen::MatrixXd J(n, n);
        std::vector<double> m(n), row(n);
        for (std::size_t it = 0;; ++it) {
            r.iterations = it;
            r.fixed_point_residual = res;
            if (res <= cfg.tol) {
                r.status = SolveStatus::converged;
                break;
            }
            if (it >= cfg.max_iter) break;
            // J = I - rho (K diag(e) / Z - (K e)(w e)^T / Z^2)
            for (std::size_t j = 0; j < n; ++j) m[j] = g.weights[j] * ev.e[j];
            for (std::size_t i = 0; i < n; ++i) {
                kt.hadamard_axpby(-rho / ev.Z, K.entries.data() + i * n, ev.e.data(),
                                  rho * ev.Ke[i] / (ev.Z * ev.Z), m.data(), row.data(), n);
                for (std::size_t j = 0; j < n; ++j) J(i, j) = row[j];
                J(i, i) += 1.0;
            }
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
            if (!(lu.rcond() > 1e-14)) {
                r.status = SolveStatus::singular_jacobian;
                break;
            }
            Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(F.data(), long(n));
            Eigen::VectorXd du = lu.solve(rhs);
            // Armijo backtracking on the sup norm of F
            double lam = 1.0;
            bool accepted = false;
            std::vector<double> un(n);
            for (int ls = 0; ls < 30; ++ls, lam *= 0.5) {
                for (std::size_t i = 0; i < n; ++i) un[i] = u[i] + lam * du[long(i)];
                try {
                    Eval evn = evaluate(un, K, cfg.u_max);
                    std::vector<double> Fn = residual_vector(un, evn, rho);
                    double rn = kt.max_abs(Fn.data(), n);
                    if (rn <= (1.0 - 1e-4 * lam) * res) {
                        u.swap(un);
                        ev = std::move(evn);
                        F = std::move(Fn);
                        res = rn;
                        accepted = true;
                        break;
                    }
                } catch (const OverflowError&) {
                }
            }
            r.trace.push_back({it, res, accepted ? lam : 0.0});
            if (!accepted) {
                r.status = SolveStatus::line_search_failed;
                break;
            }
        }
    } catch (const OverflowError&) {
        r.status = SolveStatus::overflow;
    }
    finish(r, Field(d->grid, u), rho, cfg, d);
    return r;
}

SolveResult solve(double rho, const Field& u0, const SolveConfig& cfg, const DiscretizationPtr& d) {
    const bool picard = cfg.method == Method::picard ||
                        (cfg.method == Method::automatic && rho <= cfg.picard_rho_max);
    return picard ? picard_solve(rho, u0, cfg, d) : newton_solve(rho, u0, cfg, d);
}

Branch continue_branch(double rho_start, double rho_end, double initial_step, const SolveConfig& cfg,
                       const DiscretizationPtr& d, const ContinuationOptions& opt) {
    require(rho_start > 0.0 && rho_start < rho_end, "continue_branch: need 0 < rho_start < rho_end");
    require(initial_step > 0.0, "continue_branch: step must be positive");
    cfg.validate();
    Branch b;
    SolveResult first = solve(rho_start, zero_field(d), cfg, d);
    b.last_attempted_rho = rho_start;
    if (!first.converged) {
        b.termination = Termination::no_convergence;
        b.failed_attempts = 1;
        return b;
    }
    b.points.push_back({rho_start, first});
    double rho = rho_start, step = initial_step;
    while (rho < rho_end) {
        if (b.points.back().result.u0_value > opt.u0_cap) {
            b.termination = Termination::u0_exceeded_cap;
            return b;
        }
        double next = snap(std::min(rho + step, rho_end));
        if (rho_end - next < 1e-9 * initial_step) next = rho_end;
        b.last_attempted_rho = next;
        SolveResult r = solve(next, b.points.back().result.u, cfg, d);
        if (r.converged) {
            rho = next;
            b.points.push_back({rho, std::move(r)});
            continue;
        }
        ++b.failed_attempts;
        step *= 0.5;
        if (step < opt.min_step) {
            b.termination = Termination::no_convergence;
            return b;
        }
    }
    b.termination = b.points.back().result.u0_value > opt.u0_cap ? Termination::u0_exceeded_cap
                                                                  : Termination::reached_end;
    return b;
}

SolveResult solve_from_rest(double rho, const SolveConfig& cfg, const DiscretizationPtr& d, double step,
                            const ContinuationOptions& opt) {
    require(rho > 0.0, "solve: rho must be positive");
    SolveResult direct = solve(rho, zero_field(d), cfg, d);
    if (direct.converged) return direct;
    const double start = std::min(0.5, rho);
    if (start >= rho) return direct;
    Branch b = continue_branch(start, rho, step, cfg, d, opt);
    if (b.termination == Termination::reached_end) return b.points.back().result;
    return direct;
}

}  // namespace hlmf
