#include "hlmf/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hlmf/errors.hpp"
#include "hlmf/green.hpp"

#ifndef HLMF_DEFAULT_CONSTANTS
#define HLMF_DEFAULT_CONSTANTS "data/constants.json"
#endif

namespace hlmf {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw InvalidArgument(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw InvalidArgument(where + ": unknown key '" + it.key() + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidArgument(where + ": bad value for '" + key + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedInput("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json grid_json(const GridParams& g) {
    return json{{"n", g.n}, {"kind", to_string(g.kind)}, {"grading", g.grading}};
}

}  // namespace

std::string default_constants_path() { return HLMF_DEFAULT_CONSTANTS; }

Constants load_constants(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw MalformedInput("constants file '" + path + "': " + e.what());
    }
    Constants c;
    c.path = path;
    try {
        if (j.at("schema_version").get<int>() != kSchemaVersion)
            throw MalformedInput("constants file: unsupported schema_version");
        c.version = j.at("version").get<std::string>();
        c.c_G = j.at("c_G").get<double>();
        c.green_0_half = j.at("green_0_half").get<double>();
        c.regular_part_0_0 = j.at("regular_part_0_0").get<double>();
    } catch (const json::exception& e) {
        throw MalformedInput("constants file '" + path + "': " + e.what());
    }
    return c;
}

RunConfig parse_run_config(const json& j) {
    const std::string w = "config";
    check_keys(j, {"schema_version", "grid", "solver", "rho", "rho_range", "continuation", "diagnostics", "output",
                   "constants", "threads", "simd", "audit_bound"},
               w);
    RunConfig c;
    if (j.contains("schema_version")) {
        int v = 0;
        read(j, "schema_version", v, w);
        if (v != kSchemaVersion) throw InvalidArgument("config: unsupported schema_version");
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        check_keys(g, {"n", "kind", "grading"}, "config.grid");
        read(g, "n", c.grid.n, "config.grid");
        std::string kind = to_string(c.grid.kind);
        read(g, "kind", kind, "config.grid");
        c.grid.kind = grid_kind_from_string(kind);
        read(g, "grading", c.grid.grading, "config.grid");
    }
    if (j.contains("solver")) {
        const json& s = j["solver"];
        const std::string ws = "config.solver";
        check_keys(s, {"max_iter", "tol", "damping", "method", "picard_rho_max", "certify_tol", "u_max"}, ws);
        read(s, "max_iter", c.solver.max_iter, ws);
        read(s, "tol", c.solver.tol, ws);
        read(s, "damping", c.solver.damping, ws);
        std::string m = to_string(c.solver.method);
        read(s, "method", m, ws);
        c.solver.method = method_from_string(m);
        read(s, "picard_rho_max", c.solver.picard_rho_max, ws);
        read(s, "certify_tol", c.solver.certify_tol, ws);
        read(s, "u_max", c.solver.u_max, ws);
    }
    if (j.contains("rho")) {
        double r = 0.0;
        read(j, "rho", r, w);
        c.rho = r;
    }
    if (j.contains("rho_range")) {
        const json& r = j["rho_range"];
        check_keys(r, {"start", "end", "step"}, "config.rho_range");
        RhoRange rr;
        read(r, "start", rr.start, "config.rho_range");
        read(r, "end", rr.end, "config.rho_range");
        read(r, "step", rr.step, "config.rho_range");
        c.range = rr;
    }
    if (j.contains("continuation")) {
        const json& r = j["continuation"];
        check_keys(r, {"min_step", "u0_cap"}, "config.continuation");
        read(r, "min_step", c.continuation.min_step, "config.continuation");
        read(r, "u0_cap", c.continuation.u0_cap, "config.continuation");
    }
    if (j.contains("diagnostics")) {
        const json& d = j["diagnostics"];
        const std::string wd = "config.diagnostics";
        check_keys(d, {"enabled", "profile_R", "mass_R", "green_delta", "samples", "clip_window"}, wd);
        read(d, "enabled", c.diagnostics.enabled, wd);
        read(d, "profile_R", c.diagnostics.profile_R, wd);
        read(d, "mass_R", c.diagnostics.mass_R, wd);
        read(d, "green_delta", c.diagnostics.green_delta, wd);
        read(d, "samples", c.diagnostics.samples, wd);
        read(d, "clip_window", c.diagnostics.clip_window, wd);
    }
    read(j, "output", c.output, w);
    read(j, "constants", c.constants, w);
    read(j, "threads", c.threads, w);
    read(j, "simd", c.simd, w);
    read(j, "audit_bound", c.audit_bound, w);
    return c;
}

RunConfig load_run_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw InvalidArgument("config '" + path + "': " + e.what());
    } catch (const MalformedInput& e) {
        throw InvalidArgument(e.what());
    }
    return parse_run_config(j);
}

json to_json(const RunConfig& c) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["grid"] = grid_json(c.grid);
    j["solver"] = json{{"max_iter", c.solver.max_iter}, {"tol", c.solver.tol},
                       {"damping", c.solver.damping}, {"method", to_string(c.solver.method)},
                       {"picard_rho_max", c.solver.picard_rho_max}, {"certify_tol", c.solver.certify_tol},
                       {"u_max", c.solver.u_max}};
    if (c.rho) j["rho"] = *c.rho;
    if (c.range) j["rho_range"] = json{{"start", c.range->start}, {"end", c.range->end}, {"step", c.range->step}};
    j["continuation"] = json{{"min_step", c.continuation.min_step}, {"u0_cap", c.continuation.u0_cap}};
    j["diagnostics"] = json{{"enabled", c.diagnostics.enabled}, {"profile_R", c.diagnostics.profile_R},
                            {"mass_R", c.diagnostics.mass_R}, {"green_delta", c.diagnostics.green_delta},
                            {"samples", c.diagnostics.samples}, {"clip_window", c.diagnostics.clip_window}};
    j["output"] = c.output;
    j["simd"] = c.simd;
    j["audit_bound"] = c.audit_bound;
    return j;
}

GridPtr build_grid(const GridParams& p) { return build_grid(p.n, p.kind, p.grading); }

std::string fmt12(double v) {
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt17(double v) {
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + path + "'");
    out << content;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

json solve_summary(const SolveResult& r) {
    return json{{"rho", r.rho},
                {"converged", r.converged},
                {"status", to_string(r.status)},
                {"method", to_string(r.method)},
                {"fixed_point_residual", r.fixed_point_residual},
                {"strong_residual", r.strong_residual},
                {"strong_residual_relative", r.strong_residual_relative},
                {"iterations", r.iterations},
                {"u0_value", r.u0_value},
                {"mass", r.mass}};
}

void write_solution(const std::string& prefix, const SolveResult& r, const RunConfig& cfg, const Constants& c) {
    std::ostringstream csv;
    csv << "x,u\n";
    const Grid& g = r.u.grid();
    for (std::size_t i = 0; i < g.n; ++i) csv << fmt17(g.nodes[i]) << ',' << fmt17(r.u.values()[i]) << '\n';
    const std::string csv_path = prefix + ".csv";
    write_text(csv_path, csv.str());
    json h;
    h["schema_version"] = kSchemaVersion;
    h["kind"] = "solution";
    h["solution_csv"] = std::filesystem::path(csv_path).filename().string();
    h["grid"] = grid_json(cfg.grid);
    h["result"] = solve_summary(r);
    h["solver"] = to_json(cfg)["solver"];
    h["constants"] = json{{"version", c.version}};
    write_text(prefix + ".json", json_text(h));
}

StoredSolution read_solution(const std::string& path) {
    std::filesystem::path p(path);
    std::filesystem::path hp = p, cp;
    if (p.extension() == ".csv") hp.replace_extension(".json");
    json h;
    try {
        h = json::parse(read_file(hp.string()));
    } catch (const json::exception& e) {
        throw MalformedInput("solution header: " + std::string(e.what()));
    }
    StoredSolution s;
    s.header = h;
    try {
        if (h.at("schema_version").get<int>() != kSchemaVersion) throw MalformedInput("unsupported schema_version");
        if (h.at("kind").get<std::string>() != "solution") throw MalformedInput("not a solution header");
        const json& g = h.at("grid");
        s.grid.n = g.at("n").get<std::size_t>();
        s.grid.kind = grid_kind_from_string(g.at("kind").get<std::string>());
        s.grid.grading = g.at("grading").get<double>();
        s.rho = h.at("result").at("rho").get<double>();
        s.fixed_point_residual = h.at("result").at("fixed_point_residual").get<double>();
        s.tol = h.at("solver").at("tol").get<double>();
        cp = p.extension() == ".csv" ? p : hp.parent_path() / h.at("solution_csv").get<std::string>();
    } catch (const json::exception& e) {
        throw MalformedInput("solution header: " + std::string(e.what()));
    } catch (const InvalidArgument& e) {
        throw MalformedInput(e.what());
    }
    const std::string text = read_file(cp.string());
    if (text.empty() || text.back() != '\n') throw MalformedInput("solution csv: truncated (no final newline)");
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "x,u") throw MalformedInput("solution csv: missing header row");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw MalformedInput("solution csv: bad row '" + line + "'");
        try {
            std::size_t a = 0, b = 0;
            const std::string xs = line.substr(0, comma), us = line.substr(comma + 1);
            double x = std::stod(xs, &a), u = std::stod(us, &b);
            if (a != xs.size() || b != us.size()) throw std::invalid_argument("trailing");
            s.x.push_back(x);
            s.u.push_back(u);
        } catch (const std::exception&) {
            throw MalformedInput("solution csv: bad row '" + line + "'");
        }
    }
    if (s.x.size() != s.grid.n) throw MalformedInput("solution csv: row count does not match the grid");
    return s;
}

json to_json(const PohozaevReport& r) {
    return json{{"schema_version", kSchemaVersion}, {"rho", r.rho}, {"I1", r.I1}, {"I1_direct", r.I1_direct},
                {"I1_consistency", r.I1_consistency}, {"I3", r.I3}, {"identity_residual", r.identity_residual},
                {"inequality_margin", r.inequality_margin}, {"uhat_at_1", r.uhat_at_1}, {"mass", r.mass}};
}

json to_json(const BlowupProfile& b) {
    return json{{"rho", b.rho}, {"alpha", b.alpha}, {"r", b.r}, {"eta_at_0", b.eta_at_0},
                {"eta_error", b.eta_error}, {"R", b.R}, {"R_effective", b.R_effective},
                {"window_clipped", b.window_clipped}, {"mass_in_core", b.mass_in_core}};
}

json to_json(const SymmetryReport& s) {
    return json{{"evenness_defect", s.evenness_defect}, {"monotonicity_defect", s.monotonicity_defect},
                {"positivity_defect", s.positivity_defect}};
}

BranchRowDiagnostics branch_diagnostics(const BranchPoint& p, const DiagnosticsParams& opt) {
    BranchRowDiagnostics d;
    const Field& u = p.result.u;
    BlowupOptions bo;
    bo.samples = opt.samples;
    bo.clip_to_domain = opt.clip_window;
    d.symmetry = symmetry_monotonicity(u);
    d.pohozaev = pohozaev_audit(u, p.rho);
    d.profile = blowup_profile(u, p.rho, opt.profile_R, bo);
    d.core = blowup_profile(u, p.rho, opt.mass_R, bo);
    d.green_limit = green_limit(u, p.rho, opt.green_delta, opt.samples);
    d.uhat_half = u.smooth(0.5) - d.profile.alpha;
    d.ok = true;
    return d;
}

std::string branch_csv(const Branch& b, const std::vector<BranchRowDiagnostics>& diag, bool with_diagnostics) {
    std::ostringstream os;
    os << "rho,u0,fixed_point_residual,strong_residual,strong_residual_relative,iterations,method";
    if (with_diagnostics)
        os << ",I1,I1_direct,I3,identity_residual,inequality_margin,alpha,r,r_u0,eta_error,mass_in_core,"
              "green_limit,uhat_half,evenness_defect,monotonicity_defect,positivity_defect";
    os << '\n';
    for (std::size_t k = 0; k < b.points.size(); ++k) {
        const auto& p = b.points[k];
        const auto& r = p.result;
        os << fmt12(p.rho) << ',' << fmt12(r.u0_value) << ',' << fmt12(r.fixed_point_residual) << ','
           << fmt12(r.strong_residual) << ',' << fmt12(r.strong_residual_relative) << ',' << r.iterations << ','
           << to_string(r.method);
        if (with_diagnostics) {
            const auto& d = diag.at(k);
            os << ',' << fmt12(d.pohozaev.I1) << ',' << fmt12(d.pohozaev.I1_direct) << ',' << fmt12(d.pohozaev.I3)
               << ',' << fmt12(d.pohozaev.identity_residual) << ',' << fmt12(d.pohozaev.inequality_margin) << ','
               << fmt12(d.profile.alpha) << ',' << fmt12(d.profile.r) << ',' << fmt12(d.profile.r * r.u0_value)
               << ',' << fmt12(d.profile.eta_error) << ',' << fmt12(d.core.mass_in_core) << ','
               << fmt12(d.green_limit) << ',' << fmt12(d.uhat_half) << ',' << fmt12(d.symmetry.evenness_defect)
               << ',' << fmt12(d.symmetry.monotonicity_defect) << ',' << fmt12(d.symmetry.positivity_defect);
        }
        os << '\n';
    }
    return os.str();
}

std::string green_csv(const std::vector<double>& xs) {
    std::ostringstream os;
    os << "x,G0,H0\n";
    for (double x : xs) {
        double g = 0.0, h = 0.0;
        if (std::fabs(x) < 1.0) {
            g = x == 0.0 ? std::numeric_limits<double>::infinity() : green(0.0, x);
            h = regular_part(0.0, x);
        }
        os << fmt12(x) << ',' << (std::isinf(g) ? std::string("inf") : fmt12(g)) << ',' << fmt12(h) << '\n';
    }
    return os.str();
}

}  // namespace hlmf
