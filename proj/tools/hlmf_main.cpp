// hlmf: solve, continue, audit and green subcommands.
//
// Exit codes: 0 ok, 1 bad config or malformed input, 2 no convergence or
// failed audit, 3 overflow/blow-up, 4 header inconsistent with content.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hlmf/diagnostics.hpp"
#include "hlmf/errors.hpp"
#include "hlmf/io.hpp"
#include "hlmf/parallel.hpp"
#include "hlmf/simd.hpp"
#include "hlmf/solver.hpp"

namespace {

using namespace hlmf;

enum Exit { ok = 0, bad_input = 1, no_convergence = 2, overflow = 3, inconsistent = 4 };

// Flag values; applied over the config file only when given.
struct Flags {
    RunConfig d;
    std::string config;
    std::string kind = to_string(d.grid.kind);
    std::string method = to_string(d.solver.method);
    double rho = 0.0;
    std::vector<double> range;
    bool no_diagnostics = false;
};

struct Opts {
    CLI::Option* n = nullptr;
    CLI::Option* kind = nullptr;
    CLI::Option* max_iter = nullptr;
    CLI::Option* tol = nullptr;
    CLI::Option* certify = nullptr;
    CLI::Option* method = nullptr;
    CLI::Option* damping = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* constants = nullptr;
    CLI::Option* threads = nullptr;
    CLI::Option* simd = nullptr;
};

Opts add_common(CLI::App* app, Flags& f) {
    Opts o;
    app->add_option("--config", f.config, "JSON run configuration (flags override it)");
    o.n = app->add_option("--n", f.d.grid.n, "grid size, multiple of 16 for graded_composite")->capture_default_str();
    o.kind = app->add_option("--grid", f.kind, "graded_composite | chebyshev_lobatto")->capture_default_str();
    o.max_iter = app->add_option("--max-iter", f.d.solver.max_iter, "iteration cap per solve")->capture_default_str();
    o.tol = app->add_option("--tol", f.d.solver.tol, "fixed-point residual tolerance")->capture_default_str();
    o.certify = app->add_option("--certify-tol", f.d.solver.certify_tol,
                                "relative strong residual bound for acceptance (<= 0 disables)")
                    ->capture_default_str();
    o.method = app->add_option("--method", f.method, "automatic | picard | newton")->capture_default_str();
    o.damping = app->add_option("--damping", f.d.solver.damping, "Picard damping in (0, 1]")->capture_default_str();
    o.out = app->add_option("--out", f.d.output, "output prefix")->capture_default_str();
    o.constants = app->add_option("--constants", f.d.constants, "constants file")->capture_default_str();
    o.threads = app->add_option("--threads", f.d.threads, "worker threads, 0 = THREADS or hardware")
                    ->capture_default_str();
    o.simd = app->add_option("--simd", f.d.simd, "auto | scalar | avx2")->capture_default_str();
    return o;
}

RunConfig resolve(const Flags& f, const Opts& o) {
    RunConfig c = f.config.empty() ? RunConfig{} : load_run_config(f.config);
    if (o.n->count()) c.grid.n = f.d.grid.n;
    if (o.kind->count()) c.grid.kind = grid_kind_from_string(f.kind);
    if (o.max_iter->count()) c.solver.max_iter = f.d.solver.max_iter;
    if (o.tol->count()) c.solver.tol = f.d.solver.tol;
    if (o.certify->count()) c.solver.certify_tol = f.d.solver.certify_tol;
    if (o.method->count()) c.solver.method = method_from_string(f.method);
    if (o.damping->count()) c.solver.damping = f.d.solver.damping;
    if (o.out->count()) c.output = f.d.output;
    if (o.constants->count()) c.constants = f.d.constants;
    if (o.threads->count()) c.threads = f.d.threads;
    if (o.simd->count()) c.simd = f.d.simd;
    if (f.no_diagnostics) c.diagnostics.enabled = false;
    return c;
}

void apply_runtime(const RunConfig& c) {
    if (c.threads > 0) set_thread_count(c.threads);
    if (c.simd == "scalar") {
        simd::set_active(simd::Isa::scalar);
    } else if (c.simd == "avx2") {
        require(simd::isa_supported(simd::Isa::avx2), "avx2 requested but not supported by this cpu");
        simd::set_active(simd::Isa::avx2);
    } else {
        require(c.simd == "auto", "simd must be auto, scalar or avx2");
    }
}

int cmd_solve(const RunConfig& c) {
    require(c.rho.has_value(), "solve needs --rho");
    require(std::isfinite(*c.rho) && *c.rho > 0.0, "rho must be positive");
    c.solver.validate();
    const Constants k = load_constants(c.constants);
    apply_runtime(c);
    auto d = Discretization::build(build_grid(c.grid));
    SolveResult r = solve_from_rest(*c.rho, c.solver, d, 0.1, c.continuation);
    write_solution(c.output, r, c, k);
    std::cout << solve_summary(r).dump(2) << '\n';
    if (r.converged) return ok;
    if (r.status == SolveStatus::overflow) return overflow;
    return no_convergence;
}

int cmd_continue(const RunConfig& c) {
    require(c.range.has_value(), "continue needs --range START END");
    const RhoRange& rr = *c.range;
    require(std::isfinite(rr.start) && std::isfinite(rr.end) && rr.start > 0.0 && rr.start < rr.end,
            "rho range must satisfy 0 < start < end");
    require(std::isfinite(rr.step) && rr.step > 0.0, "rho step must be positive");
    c.solver.validate();
    const Constants k = load_constants(c.constants);
    apply_runtime(c);
    auto d = Discretization::build(build_grid(c.grid));
    Branch b = continue_branch(rr.start, rr.end, rr.step, c.solver, d, c.continuation);
    std::vector<BranchRowDiagnostics> diag;
    if (c.diagnostics.enabled)
        for (const auto& p : b.points) diag.push_back(branch_diagnostics(p, c.diagnostics));
    const std::string csv = c.output + "_branch.csv";
    write_text(csv, branch_csv(b, diag, c.diagnostics.enabled));
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "branch";
    j["branch_csv"] = std::filesystem::path(csv).filename().string();
    j["termination"] = to_string(b.termination);
    j["points"] = b.points.size();
    j["last_converged_rho"] = b.points.empty() ? 0.0 : b.points.back().rho;
    j["last_attempted_rho"] = b.last_attempted_rho;
    j["failed_attempts"] = b.failed_attempts;
    j["config"] = to_json(c);
    j["constants"] = nlohmann::json{{"version", k.version}};
    write_text(c.output + "_branch.json", json_text(j));
    std::cout << json_text(j);
    return b.termination == Termination::reached_end ? ok : no_convergence;
}

int cmd_audit(const std::string& file, const RunConfig& c) {
    StoredSolution s = read_solution(file);
    apply_runtime(c);
    GridPtr g = build_grid(s.grid);
    for (std::size_t i = 0; i < g->n; ++i)
        if (s.x[i] != g->nodes[i]) throw MalformedInput("solution nodes do not match the grid descriptor");
    require(std::isfinite(s.rho) && s.rho > 0.0, "header rho must be positive");
    auto d = Discretization::build(g);
    Field u(g, s.u);
    // the stored field must be a fixed point for the stored rho
    const Field tu = apply_T(u, s.rho, *d->K, c.solver.u_max);
    double fp = 0.0;
    for (std::size_t i = 0; i < g->n; ++i) fp = std::max(fp, std::fabs(tu.values()[i] - s.u[i]));
    const double bound = std::max(100.0 * s.tol, 1e-8);
    if (!(fp <= bound)) {
        std::cerr << "hlmf: header inconsistent with content: fixed-point residual " << fp << " at rho = " << s.rho
                  << '\n';
        return inconsistent;
    }
    attach_nystrom(u, s.rho, d->op);
    PohozaevReport p = pohozaev_audit(u, s.rho);
    nlohmann::json j = to_json(p);
    j["fixed_point_residual"] = fp;
    j["audit_bound"] = c.audit_bound;
    const bool pass = p.inequality_margin < 0.0 && p.identity_residual <= c.audit_bound;
    j["pass"] = pass;
    std::cout << json_text(j);
    return pass ? ok : no_convergence;
}

int cmd_green(const std::vector<double>& xs, const std::vector<double>& range, std::size_t count,
              const std::string& out) {
    std::vector<double> pts = xs;
    if (pts.empty()) {
        require(range.size() == 2 && std::isfinite(range[0]) && std::isfinite(range[1]) && range[0] < range[1],
                "green needs --x values or --range A B with A < B");
        require(count >= 2, "green --count must be at least 2");
        for (std::size_t i = 0; i < count; ++i) {
            // symmetric spacing: mirror of sample i is sample count-1-i
            const double t = static_cast<double>(2 * i) / static_cast<double>(count - 1) - 1.0;
            pts.push_back(0.5 * (range[0] + range[1]) + 0.5 * (range[1] - range[0]) * t);
        }
    }
    for (double x : pts) require(std::isfinite(x), "green sample must be finite");
    const std::string csv = green_csv(pts);
    if (out.empty() || out == "-")
        std::cout << csv;
    else
        write_text(out, csv);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Half-Laplacian mean-field equation solver and verification lab on (-1, 1)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hlmf 2026.10.1");

    Flags fs, fc, fa;
    auto* solve = app.add_subcommand("solve", "solve at a single rho; writes PREFIX.csv and PREFIX.json");
    Opts os = add_common(solve, fs);
    auto* rho_opt = solve->add_option("--rho", fs.rho, "mean-field parameter, 0 < rho");

    auto* cont = app.add_subcommand("continue", "continuation in rho; writes PREFIX_branch.csv and .json");
    Opts oc = add_common(cont, fc);
    auto* range_opt = cont->add_option("--range", fc.range, "START END")->expected(2);
    double step = RhoRange{}.step;
    auto* step_opt = cont->add_option("--step", step, "initial rho step")->capture_default_str();
    double u0_cap = ContinuationOptions{}.u0_cap;
    auto* cap_opt = cont->add_option("--u0-cap", u0_cap, "stop once u(0) exceeds this")->capture_default_str();
    cont->add_flag("--no-diagnostics", fc.no_diagnostics, "omit diagnostic columns");

    auto* audit = app.add_subcommand("audit", "Pohozaev audit of a file written by solve");
    Opts oa = add_common(audit, fa);
    std::string file;
    audit->add_option("file", file, "solution .json header or .csv")->required();
    double bound = RunConfig{}.audit_bound;
    auto* bound_opt = audit->add_option("--bound", bound, "identity_residual bound")->capture_default_str();

    auto* green = app.add_subcommand("green", "CSV of x, G_0(x), H(0, x); 12 significant digits");
    std::vector<double> gx, grange{-1.15, 1.15};
    std::size_t gcount = 24;
    std::string gout;
    green->add_option("--x", gx, "explicit sample points");
    green->add_option("--range", grange, "A B for evenly spaced samples")->expected(2)->capture_default_str();
    green->add_option("--count", gcount, "number of evenly spaced samples")->capture_default_str();
    green->add_option("--out", gout, "output file, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : bad_input;
    }

    try {
        if (*solve) {
            RunConfig c = resolve(fs, os);
            if (rho_opt->count()) c.rho = fs.rho;
            return cmd_solve(c);
        }
        if (*cont) {
            RunConfig c = resolve(fc, oc);
            if (range_opt->count()) {
                RhoRange rr = c.range.value_or(RhoRange{});
                rr.start = fc.range[0];
                rr.end = fc.range[1];
                c.range = rr;
            }
            if (step_opt->count()) {
                RhoRange rr = c.range.value_or(RhoRange{});
                rr.step = step;
                c.range = rr;
            }
            if (cap_opt->count()) c.continuation.u0_cap = u0_cap;
            return cmd_continue(c);
        }
        if (*audit) {
            RunConfig c = resolve(fa, oa);
            if (bound_opt->count()) c.audit_bound = bound;
            return cmd_audit(file, c);
        }
        if (*green) return cmd_green(gx, grange, gcount, gout);
    } catch (const MalformedInput& e) {
        std::cerr << "hlmf: malformed input: " << e.what() << '\n';
        return bad_input;
    } catch (const InvalidArgument& e) {
        std::cerr << "hlmf: " << e.what() << '\n';
        return bad_input;
    } catch (const OverflowError& e) {
        std::cerr << "hlmf: overflow: " << e.what() << '\n';
        return overflow;
    } catch (const std::exception& e) {
        std::cerr << "hlmf: " << e.what() << '\n';
        return bad_input;
    }
    return bad_input;
}
