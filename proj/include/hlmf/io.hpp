#pragma once
// Run configuration, constants file, and CSV/JSON serialization.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hlmf/diagnostics.hpp"
#include "hlmf/grid.hpp"
#include "hlmf/solver.hpp"

namespace hlmf {

inline constexpr int kSchemaVersion = 1;

// Input that cannot be parsed or is structurally incomplete.
class MalformedInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Constants {
    std::string path;
    std::string version;
    double c_G = 0.0;
    double green_0_half = 0.0;
    double regular_part_0_0 = 0.0;
};

Constants load_constants(const std::string& path);
std::string default_constants_path();

struct GridParams {
    std::size_t n = 256;
    GridKind kind = GridKind::graded_composite;
    double grading = 0.5;
};

struct RhoRange {
    double start = 0.5;
    double end = 6.2;
    double step = 0.1;
};

struct DiagnosticsParams {
    bool enabled = true;
    double profile_R = 10.0;
    double mass_R = 20.0;
    double green_delta = 0.3;
    std::size_t samples = 400;
    bool clip_window = true;
};

struct RunConfig {
    GridParams grid;
    SolveConfig solver;
    std::optional<double> rho;
    std::optional<RhoRange> range;
    ContinuationOptions continuation;
    DiagnosticsParams diagnostics;
    std::string output = "hlmf_out";
    std::string constants = default_constants_path();
    std::size_t threads = 0;   // 0: THREADS or hardware default
    std::string simd = "auto";
    double audit_bound = 1e-3;
};

// Strict: unknown keys and wrong types raise InvalidArgument.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

GridPtr build_grid(const GridParams& p);

// %.12g
std::string fmt12(double v);
// round-trip precision
std::string fmt17(double v);

void write_text(const std::string& path, const std::string& content);
std::string json_text(const nlohmann::json& j);

// Solution artifacts: <prefix>.csv with x,u and <prefix>.json header.
void write_solution(const std::string& prefix, const SolveResult& r, const RunConfig& cfg, const Constants& c);

struct StoredSolution {
    double rho = 0.0;
    GridParams grid;
    std::vector<double> x;
    std::vector<double> u;
    double tol = 0.0;
    double fixed_point_residual = 0.0;
    nlohmann::json header;
};

// Accepts the .json header or the .csv; throws MalformedInput.
StoredSolution read_solution(const std::string& path);

nlohmann::json to_json(const PohozaevReport& r);
nlohmann::json to_json(const BlowupProfile& b);
nlohmann::json to_json(const SymmetryReport& s);
nlohmann::json solve_summary(const SolveResult& r);

struct BranchRowDiagnostics {
    PohozaevReport pohozaev;
    BlowupProfile profile;
    BlowupProfile core;
    SymmetryReport symmetry;
    double green_limit = 0.0;
    double uhat_half = 0.0;
    bool ok = false;
};

BranchRowDiagnostics branch_diagnostics(const BranchPoint& p, const DiagnosticsParams& opt);
std::string branch_csv(const Branch& b, const std::vector<BranchRowDiagnostics>& diag, bool with_diagnostics);

// x, G_0(x), H(0, x); exterior rows are 0.
std::string green_csv(const std::vector<double>& xs);

}  // namespace hlmf
