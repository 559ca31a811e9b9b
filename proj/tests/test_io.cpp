#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "hlmf/errors.hpp"
#include "hlmf/io.hpp"

using namespace hlmf;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir() {
    static const fs::path p = [] {
        fs::path d = fs::temp_directory_path() / ("hlmf_io_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args, const std::string& capture = "") {
    std::string cmd = std::string(HLMF_CLI_PATH) + " " + args;
    cmd += capture.empty() ? " >/dev/null 2>&1" : " >" + capture + " 2>/dev/null";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_SUITE("io") {
TEST_CASE("constants file") {
    const Constants& c = hlmf::test::constants();
    CHECK(c.version == "2026.10.1");
    CHECK(c.c_G == 1.0);
    CHECK_THROWS_AS(load_constants((scratch_dir() / "missing.json").string()), MalformedInput);
}

TEST_CASE("run config parsing") {
    const RunConfig d = parse_run_config(json::object());
    CHECK(d.grid.n == 256);
    CHECK(d.grid.kind == GridKind::graded_composite);
    CHECK(d.solver.tol == 1e-10);
    CHECK_FALSE(d.rho.has_value());

    const json j = json::parse(R"({"schema_version": 1, "grid": {"n": 128, "kind": "chebyshev_lobatto"},
        "solver": {"tol": 1e-9, "method": "newton"}, "rho": 2.5,
        "rho_range": {"start": 0.5, "end": 1.0, "step": 0.25},
        "diagnostics": {"enabled": false}, "output": "x/y", "audit_bound": 1e-4})");
    const RunConfig c = parse_run_config(j);
    CHECK(c.grid.n == 128);
    CHECK(c.grid.kind == GridKind::chebyshev_lobatto);
    CHECK(c.solver.tol == 1e-9);
    CHECK(c.solver.method == Method::newton);
    CHECK(*c.rho == 2.5);
    CHECK(c.range->step == 0.25);
    CHECK_FALSE(c.diagnostics.enabled);
    CHECK(c.output == "x/y");
    CHECK(c.audit_bound == 1e-4);
    // round trip through the serializer
    CHECK(to_json(parse_run_config(to_json(c))) == to_json(c));

    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"rhoo": 1})")), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"grid": {"size": 1}})")), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"solver": {"tol": "small"}})")), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"schema_version": 2})")), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config(json::parse("[1, 2]")), InvalidArgument);
}

TEST_CASE("number formatting") {
    CHECK(fmt12(0.41920071827898275) == "0.419200718279");
    CHECK(fmt12(0.0) == "0");
    CHECK(std::stod(fmt17(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("solution round trip") {
    const SolveResult& r = hlmf::test::solution_pi();
    RunConfig cfg;
    const std::string prefix = (scratch_dir() / "rt").string();
    write_solution(prefix, r, cfg, hlmf::test::constants());
    const StoredSolution s = read_solution(prefix + ".json");
    CHECK(s.rho == r.rho);
    CHECK(s.grid.n == 256);
    CHECK(s.u == r.u.values());
    CHECK(s.x == r.u.grid().nodes);
    CHECK(s.header.at("schema_version") == kSchemaVersion);
    CHECK(s.header.at("constants").at("version") == "2026.10.1");
    const StoredSolution s2 = read_solution(prefix + ".csv");
    CHECK(s2.u == s.u);
    const std::string csv = slurp(prefix + ".csv");
    CHECK(csv.rfind("x,u\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);

    // malformed variants
    write_text((scratch_dir() / "short.csv").string(), csv.substr(0, csv.size() / 2));
    json h = s.header;
    h["solution_csv"] = "short.csv";
    write_text((scratch_dir() / "short.json").string(), json_text(h));
    CHECK_THROWS_AS(read_solution((scratch_dir() / "short.json").string()), MalformedInput);
    write_text((scratch_dir() / "bad.json").string(), "{not json");
    CHECK_THROWS_AS(read_solution((scratch_dir() / "bad.json").string()), MalformedInput);
    h = s.header;
    h.erase("grid");
    write_text((scratch_dir() / "nogrid.json").string(), json_text(h));
    CHECK_THROWS_AS(read_solution((scratch_dir() / "nogrid.json").string()), MalformedInput);
}

TEST_CASE("green csv examples") {
    const std::string csv = green_csv({-1.2, -0.5, 0.5, 1.2});
    std::istringstream in(csv);
    std::string header, a, b, c, d;
    std::getline(in, header);
    std::getline(in, a);
    std::getline(in, b);
    std::getline(in, c);
    std::getline(in, d);
    CHECK(header == "x,G0,H0");
    CHECK(a == "-1.2,0,0");
    CHECK(d == "1.2,0,0");
    CHECK(c.rfind("0.5,0.4192", 0) == 0);
    CHECK(std::fabs(std::stod(c.substr(4, 14)) - 0.419196) <= 1e-5);
    CHECK(b.substr(1) == c);
}

TEST_CASE("cli exit codes and artifacts") {
    const fs::path dir = scratch_dir();
    CHECK(run_cli("--help") == 0);
    const fs::path help = dir / "help.txt";
    CHECK(run_cli("solve --help", q(help)) == 0);
    const std::string h = slurp(help);
    CHECK(h.find("256") != std::string::npos);
    CHECK(h.find("1e-10") != std::string::npos);

    CHECK(run_cli("solve --rho 3.14159 --out " + q(dir / "pi")) == 0);
    CHECK(fs::exists(dir / "pi.csv"));
    CHECK(fs::exists(dir / "pi.json"));
    CHECK(json::parse(slurp(dir / "pi.json")).at("schema_version") == kSchemaVersion);
    CHECK(run_cli("solve --rho -1 --out " + q(dir / "neg")) == 1);
    CHECK(run_cli("solve --out " + q(dir / "none")) == 1);
    CHECK(run_cli("solve --rho 1 --n 40 --out " + q(dir / "badn")) == 1);
    CHECK(run_cli("solve --rho abc") == 1);
    CHECK(run_cli("frobnicate") == 1);

    // config file, overridden by flags
    write_text((dir / "cfg.json").string(), R"({"rho": 1.0, "output": ")" + (dir / "fromcfg").string() + "\"}");
    CHECK(run_cli("solve --config " + q(dir / "cfg.json")) == 0);
    CHECK(json::parse(slurp(dir / "fromcfg.json")).at("result").at("rho") == 1.0);
    CHECK(run_cli("solve --config " + q(dir / "cfg.json") + " --rho 2.0") == 0);
    CHECK(json::parse(slurp(dir / "fromcfg.json")).at("result").at("rho") == 2.0);
    write_text((dir / "unknown.json").string(), R"({"rho": 1.0, "colour": "red"})");
    CHECK(run_cli("solve --config " + q(dir / "unknown.json")) == 1);

    // audit
    CHECK(run_cli("audit " + q(dir / "pi.json")) == 0);
    json hdr = json::parse(slurp(dir / "pi.json"));
    hdr["result"]["rho"] = 7.0;
    write_text((dir / "tampered.json").string(), json_text(hdr));
    CHECK(run_cli("audit " + q(dir / "tampered.json")) == 4);
    const std::string csv = slurp(dir / "pi.csv");
    write_text((dir / "trunc.csv").string(), csv.substr(0, csv.size() - 40));
    hdr = json::parse(slurp(dir / "pi.json"));
    hdr["solution_csv"] = "trunc.csv";
    write_text((dir / "trunc.json").string(), json_text(hdr));
    CHECK(run_cli("audit " + q(dir / "trunc.json")) == 1);
    CHECK(run_cli("audit " + q(dir / "does_not_exist.json")) == 1);

    // continue
    CHECK(run_cli("continue --range 1.0 0.5 --out " + q(dir / "empty")) == 1);
    CHECK(run_cli("continue --range 0.5 1.0 --out " + q(dir / "short")) == 0);
    const std::string branch = slurp(dir / "short_branch.csv");
    CHECK(branch.rfind("rho,u0,", 0) == 0);
    CHECK(std::count(branch.begin(), branch.end(), '\n') == 7);
    for (const char* col : {"I1", "I3", "identity_residual", "inequality_margin", "eta_error", "green_limit",
                            "mass_in_core"})
        CHECK(branch.substr(0, branch.find('\n')).find(col) != std::string::npos);

    // green
    CHECK(run_cli("green --x 0.5 1.2 --out " + q(dir / "g.csv")) == 0);
    CHECK(slurp(dir / "g.csv") == "x,G0,H0\n0.5,0.419200718279,0.198565118126\n1.2,0,0\n");
    CHECK(run_cli("green --range 1 -1") == 1);
}

TEST_CASE("cli determinism") {
    const fs::path dir = scratch_dir();
    CHECK(run_cli("solve --rho 2.5 --out " + q(dir / "d1")) == 0);
    CHECK(run_cli("solve --rho 2.5 --out " + q(dir / "d2")) == 0);
    CHECK(slurp(dir / "d1.csv") == slurp(dir / "d2.csv"));
    // headers differ only in the csv file name
    json a = json::parse(slurp(dir / "d1.json")), b = json::parse(slurp(dir / "d2.json"));
    a.erase("solution_csv");
    b.erase("solution_csv");
    CHECK(a == b);
    CHECK(run_cli("green --out " + q(dir / "g1.csv")) == 0);
    CHECK(run_cli("green --out " + q(dir / "g2.csv")) == 0);
    CHECK(slurp(dir / "g1.csv") == slurp(dir / "g2.csv"));
    // default sample set is symmetric: row i mirrors row count-1-i
    std::istringstream in(slurp(dir / "g1.csv"));
    std::vector<std::string> rows;
    for (std::string l; std::getline(in, l);) rows.push_back(l);
    REQUIRE(rows.size() == 25);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::string& r = rows[i];
        const std::string& m = rows[rows.size() - i];
        CHECK(r.substr(r.find(',')) == m.substr(m.find(',')));
    }
}
}
