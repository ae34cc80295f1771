#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "ckdv/cli.hpp"
#include "ckdv/config.hpp"
#include "ckdv/csv.hpp"
#include "ckdv/grid.hpp"
#include "ckdv/kdv.hpp"

using namespace ckdv;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("ckdv_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool mentions(const SchemaError& e, const std::string& text) {
    for (const auto& v : e.violations)
        if (v.find(text) != std::string::npos) return true;
    return false;
}

const char* kMinimalKdv = R"({
  "grid": {"length": 40.0, "n": 256},
  "coupling": {"weights": [1.0], "mnls": true},
  "initial": {"profile": "soliton", "kappa": 1.0, "x0": 10.0},
  "integrate": {"t_final": 0.01}
})";

} // namespace

TEST_CASE("minimal kdv config parses with defaults filled") {
    const RunConfig cfg = parse_config(kMinimalKdv, ConfigFormat::Json);
    REQUIRE(cfg.grid.has_value());
    CHECK(cfg.grid->length == 40.0);
    CHECK(cfg.grid->n == 256);
    REQUIRE(cfg.integrate.has_value());
    REQUIRE(cfg.integrate->dt.has_value());
    // dt default follows the stability guideline for the grid
    CHECK(*cfg.integrate->dt ==
          doctest::Approx(guideline_dt(make_grid(40.0, 256))).epsilon(1e-12));
    CHECK(cfg.output.directory == ".");
    REQUIRE(cfg.initial.has_value());
    REQUIRE(cfg.initial->profiles.size() == 1);
    CHECK(cfg.initial->profiles[0].type == "soliton");
}

TEST_CASE("stability condition h < min g is enforced with a citation") {
    const std::string text = R"({
      "ensemble": {"rho0": [1.0, 1.0], "g": [2.0, 1.5], "h": 1.5}
    })";
    try {
        parse_config(text, ConfigFormat::Json);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(mentions(e, "stability requires h < min g"));
    }
}

TEST_CASE("rank-one s2 is rejected with a citation") {
    const std::string text = R"({
      "coupling": {"weights": [1.0, 1.0], "s1": 0.3, "s2": 0.5}
    })";
    try {
        parse_config(text, ConfigFormat::Json);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(mentions(e, "rank-1"));
    }
}

TEST_CASE("every violation is reported, not just the first") {
    const std::string text = R"({
      "grid": {"length": -5.0, "n": 100, "bogus": 1},
      "coupling": {"weights": [1.0, 1.0], "s1": 0.3, "s2": 0.5},
      "mystery": {}
    })";
    try {
        parse_config(text, ConfigFormat::Json);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.violations.size() >= 4);
        CHECK(mentions(e, "unknown key 'bogus'"));
        CHECK(mentions(e, "unknown key 'mystery'"));
        CHECK(mentions(e, "length"));
        CHECK(mentions(e, "power of two"));
        CHECK(mentions(e, "rank-1"));
    }
}

TEST_CASE("TOML and JSON configs parse identically") {
    const std::string toml = R"(
# comment
[grid]
length = 40.0
n = 256

[coupling]
weights = [1.0, 2.0]
mnls = true

[initial]
profile = "gaussian"
amplitude = 0.5
sigma = 1.5

[integrate]
t_final = 0.25
dt = 1e-3
snapshot_stride = 100

[output]
directory = "out"
)";
    const std::string json = R"({
      "grid": {"length": 40.0, "n": 256},
      "coupling": {"weights": [1.0, 2.0], "mnls": true},
      "initial": {"profile": "gaussian", "amplitude": 0.5, "sigma": 1.5},
      "integrate": {"t_final": 0.25, "dt": 1e-3, "snapshot_stride": 100},
      "output": {"directory": "out"}
    })";
    const RunConfig a = parse_config(toml, ConfigFormat::Toml);
    const RunConfig b = parse_config(json, ConfigFormat::Json);
    CHECK(a.grid->length == b.grid->length);
    CHECK(a.coupling->weights == b.coupling->weights);
    CHECK(a.coupling->mnls == b.coupling->mnls);
    CHECK(a.initial->profiles[0].amplitude == b.initial->profiles[0].amplitude);
    CHECK(*a.integrate->dt == *b.integrate->dt);
    CHECK(a.integrate->snapshot_stride == b.integrate->snapshot_stride);
    CHECK(a.output.directory == b.output.directory);
}

TEST_CASE("TOML nested arrays carry the degenerate extras") {
    const std::string toml = R"(
[degenerate]
lambda_star = 1.0
h = 1.0
rho_ref = 1.0
weights = [1.0, 2.0]
extras = [[0.5, 4.0], [0.25, 6.0]]
)";
    const RunConfig cfg = parse_config(toml, ConfigFormat::Toml);
    REQUIRE(cfg.degenerate.has_value());
    REQUIRE(cfg.degenerate->extras.size() == 2);
    CHECK(cfg.degenerate->extras[0].first == 0.5);
    CHECK(cfg.degenerate->extras[1].second == 6.0);
}

TEST_CASE("coupling check CLI: valid and degenerate parameters") {
    CHECK(cli::run({"coupling", "check", "--weights", "1,2", "--mnls"}) == 0);
    CHECK(cli::run({"coupling", "check", "--weights", "1,2", "--s1", "0.3", "--s2", "-0.2"}) == 0);
    // s2 = (sum w)^-1 exactly: construction fails -> runtime error exit
    CHECK(cli::run({"coupling", "check", "--weights", "1,1", "--s1", "0.3", "--s2", "0.5"}) == 1);
}

TEST_CASE("kdv run writes snapshots and conserves the invariants") {
    const fs::path dir = temp_dir("kdv_run");
    const std::string config = R"({
      "grid": {"length": 40.0, "n": 256},
      "coupling": {"weights": [1.0], "s1": 0.0, "s2": 0.0},
      "initial": {"profile": "soliton", "kappa": 1.0, "x0": 10.0},
      "integrate": {"dt": 5e-4, "t_final": 0.2, "snapshot_stride": 200},
      "output": {"directory": ")" + dir.string() + R"("}
    })";
    const fs::path cfg_path = dir / "run.json";
    write_file(cfg_path, config);

    CHECK(cli::run({"kdv", "run", "--config", cfg_path.string()}) == 0);
    CHECK(fs::exists(dir / "fields_0000.csv"));
    CHECK(fs::exists(dir / "fields_0002.csv"));
    const CsvTable inv = read_csv(dir / "invariants.csv");
    REQUIRE(inv.header == std::vector<std::string>{"t", "P", "H"});
    REQUIRE(inv.rows.size() == 3);
    const double p0 = inv.rows.front()[1], p1 = inv.rows.back()[1];
    const double h0 = inv.rows.front()[2], h1 = inv.rows.back()[2];
    CHECK(std::abs(p1 - p0) / std::abs(p0) < 1e-8);
    CHECK(std::abs(h1 - h0) / std::abs(h0) < 1e-8);

    const CsvTable f0 = read_csv(dir / "fields_0000.csv");
    CHECK(f0.header == std::vector<std::string>{"x", "u1"});
    CHECK(static_cast<int>(f0.rows.size()) == 256);
}

TEST_CASE("identical configs produce bit-identical CSV output") {
    const fs::path dir1 = temp_dir("det1");
    const fs::path dir2 = temp_dir("det2");
    auto config_for = [](const fs::path& dir) {
        return std::string(R"({
          "grid": {"length": 30.0, "n": 128},
          "coupling": {"weights": [1.0, 2.0], "mnls": true},
          "initial": [{"profile": "gaussian", "amplitude": 0.4, "sigma": 2.0},
                      {"profile": "gaussian", "amplitude": -0.3, "sigma": 1.5}],
          "integrate": {"dt": 1e-3, "t_final": 0.05},
          "output": {"directory": ")") +
               dir.string() + R"("}
        })";
    };
    write_file(dir1 / "c.json", config_for(dir1));
    write_file(dir2 / "c.json", config_for(dir2));
    REQUIRE(cli::run({"kdv", "run", "--config", (dir1 / "c.json").string()}) == 0);
    REQUIRE(cli::run({"kdv", "run", "--config", (dir2 / "c.json").string()}) == 0);
    CHECK(slurp(dir1 / "fields_0001.csv") == slurp(dir2 / "fields_0001.csv"));
    CHECK(slurp(dir1 / "invariants.csv") == slurp(dir2 / "invariants.csv"));
}

TEST_CASE("mnls run emits psi snapshots and conserved masses") {
    const fs::path dir = temp_dir("mnls_run");
    const std::string config = R"({
      "grid": {"length": 20.0, "n": 128},
      "ensemble": {"rho0": [1.0, 2.0], "g": [2.0, 1.5], "h": 1.0},
      "initial": {"plane_wave": true, "theta_bar": [0.0, 0.5]},
      "integrate": {"dt": 1e-3, "t_final": 0.1, "snapshot_stride": 50},
      "output": {"directory": ")" + dir.string() + R"("}
    })";
    write_file(dir / "c.json", config);
    CHECK(cli::run({"mnls", "run", "--config", (dir / "c.json").string()}) == 0);
    const CsvTable m = read_csv(dir / "mass.csv");
    REQUIRE(m.header == std::vector<std::string>{"t", "mass1", "mass2"});
    REQUIRE(m.rows.size() == 3);
    CHECK(m.rows[0][1] == doctest::Approx(20.0).epsilon(1e-12));  // rho0 L
    CHECK(m.rows[0][2] == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(std::abs(m.rows.back()[1] - m.rows[0][1]) / m.rows[0][1] < 1e-10);
    const CsvTable psi = read_csv(dir / "psi_0002.csv");
    CHECK(psi.header ==
          std::vector<std::string>{"x", "re_psi1", "im_psi1", "re_psi2", "im_psi2"});
}

TEST_CASE("spectrum analyze passes on the degenerate family") {
    const fs::path dir = temp_dir("spectrum");
    const std::string config = R"({
      "degenerate": {"lambda_star": 1.0, "h": 1.0, "rho_ref": 1.0, "weights": [1.0, 2.0]}
    })";
    write_file(dir / "c.json", config);
    CHECK(cli::run({"spectrum", "analyze", "--config", (dir / "c.json").string()}) == 0);

    const std::string ens = R"({
      "ensemble": {"rho0": [1.0, 1.0, 1.0], "g": [2.0, 2.0, 2.0], "h": 1.0}
    })";
    write_file(dir / "e.json", ens);
    CHECK(cli::run({"spectrum", "analyze", "--config", (dir / "e.json").string()}) == 0);
}

TEST_CASE("reduce verify: monotone run exits 0, degenerate flat run exits 2") {
    const fs::path dir = temp_dir("reduce");
    const std::string base = R"({
      "grid": {"length": 60.0, "n": 128},
      "degenerate": {"lambda_star": 1.0, "h": 1.0, "rho_ref": 1.0, "weights": [1.0, 2.0]},
      "initial": [{"profile": "dipole", "amplitude": 0.6, "sigma": 1.1, "x0": 29.5},
                  {"profile": "dipole", "amplitude": -0.4, "sigma": 1.0, "x0": 30.5}],
      "reduce": {"epsilons": [0.4, 0.3, 0.2], "tau_final": 0.2},
      "output": {"directory": ")" + dir.string() + R"("}
    })";
    write_file(dir / "c.json", base);
    CHECK(cli::run({"reduce", "verify", "--config", (dir / "c.json").string()}) == 0);
    const CsvTable conv = read_csv(dir / "convergence.csv");
    REQUIRE(conv.header == std::vector<std::string>{"epsilon", "error", "order"});
    REQUIRE(conv.rows.size() == 3);
    CHECK(conv.rows[1][1] < conv.rows[0][1]);
    CHECK(conv.rows[2][1] < conv.rows[1][1]);
    CHECK(fs::exists(dir / "profiles_eps0.4.csv"));
    CHECK(fs::exists(dir / "profiles_eps0.2.csv"));

    // zero initial data: every error is ~0, so "strictly decreasing" fails
    const fs::path dir2 = temp_dir("reduce_flat");
    const std::string flat = R"({
      "grid": {"length": 60.0, "n": 64},
      "degenerate": {"lambda_star": 1.0, "h": 1.0, "rho_ref": 1.0, "weights": [1.0]},
      "initial": [{"profile": "gaussian", "amplitude": 0.0, "sigma": 1.0}],
      "reduce": {"epsilons": [0.5, 0.4, 0.3], "tau_final": 0.02},
      "output": {"directory": ")" + dir2.string() + R"("}
    })";
    write_file(dir2 / "c.json", flat);
    CHECK(cli::run({"reduce", "verify", "--config", (dir2 / "c.json").string()}) == 2);
}

TEST_CASE("environment variable overrides the output directory") {
    const fs::path dir = temp_dir("env_out");
    const fs::path override_dir = temp_dir("env_out_override");
    const std::string config = R"({
      "grid": {"length": 40.0, "n": 128},
      "coupling": {"weights": [1.0], "s1": 0.0, "s2": 0.0},
      "initial": {"profile": "soliton", "kappa": 1.0, "x0": 10.0},
      "integrate": {"dt": 1e-3, "t_final": 0.01},
      "output": {"directory": ")" + dir.string() + R"("}
    })";
    write_file(dir / "c.json", config);
    setenv("CKDV_OUTPUT_DIR", override_dir.c_str(), 1);
    CHECK(cli::run({"kdv", "run", "--config", (dir / "c.json").string()}) == 0);
    unsetenv("CKDV_OUTPUT_DIR");
    CHECK(fs::exists(override_dir / "invariants.csv"));
    CHECK(!fs::exists(dir / "invariants.csv"));
}

TEST_CASE("missing sections are reported per command") {
    const fs::path dir = temp_dir("missing");
    write_file(dir / "c.json", R"({"grid": {"length": 10.0, "n": 64}})");
    CHECK(cli::run({"kdv", "run", "--config", (dir / "c.json").string()}) == 1);
    CHECK(cli::run({"mnls", "run", "--config", (dir / "c.json").string()}) == 1);
    CHECK(cli::run({"spectrum", "analyze", "--config", (dir / "c.json").string()}) == 1);
    CHECK(cli::run({"reduce", "verify", "--config", (dir / "c.json").string()}) == 1);
}

TEST_CASE("from_file profiles round-trip through fields CSV") {
    const fs::path dir = temp_dir("fromfile");
    // produce a snapshot, then restart from it
    const std::string config = R"({
      "grid": {"length": 40.0, "n": 128},
      "coupling": {"weights": [1.0], "s1": 0.0, "s2": 0.0},
      "initial": {"profile": "soliton", "kappa": 1.0, "x0": 10.0},
      "integrate": {"dt": 1e-3, "t_final": 0.01},
      "output": {"directory": ")" + dir.string() + R"("}
    })";
    write_file(dir / "c.json", config);
    REQUIRE(cli::run({"kdv", "run", "--config", (dir / "c.json").string()}) == 0);

    const std::string restart = R"({
      "grid": {"length": 40.0, "n": 128},
      "coupling": {"weights": [1.0], "s1": 0.0, "s2": 0.0},
      "initial": {"profile": "from_file", "path": ")" + (dir / "fields_0001.csv").string() + R"(", "column": 1},
      "integrate": {"dt": 1e-3, "t_final": 0.01},
      "output": {"directory": ")" + (dir / "restart").string() + R"("}
    })";
    write_file(dir / "r.json", restart);
    CHECK(cli::run({"kdv", "run", "--config", (dir / "r.json").string()}) == 0);
    const CsvTable a = read_csv(dir / "fields_0001.csv");
    const CsvTable b = read_csv(dir / "restart" / "fields_0000.csv");
    for (int i = 0; i < 128; ++i) CHECK(a.rows[i][1] == b.rows[i][1]);
}
