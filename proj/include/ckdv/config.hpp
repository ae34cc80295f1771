#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ckdv/errors.hpp"

namespace ckdv {

struct GridSection {
    double length = 0.0;
    int n = 0;
};

struct CouplingSection {
    std::vector<double> weights;
    std::optional<double> s1, s2;
    bool mnls = false;
};

struct EnsembleSection {
    std::vector<double> rho0, g;
    double h = 0.0;
};

struct DegenerateSection {
    double lambda_star = 0.0;
    double h = 0.0;
    double rho_ref = 1.0;
    std::vector<double> weights;
    std::vector<std::pair<double, double>> extras; // (rho0, g)
};

struct ProfileSpec {
    std::string type; // soliton | gaussian | from_file
    double kappa = 1.0;
    double amplitude = 1.0;
    double sigma = 1.0;
    std::optional<double> x0; // default: domain center
    std::string path;
    int column = 1; // 1-based field column in a from_file CSV (column 0 is x)
};

struct PerturbationSection {
    double epsilon = 0.1;
    GridSection slow_grid;
    std::vector<ProfileSpec> f0;
};

struct InitialSection {
    std::vector<ProfileSpec> profiles;
    bool plane_wave = false;
    std::vector<double> theta_bar;
    std::optional<PerturbationSection> perturbation;
};

struct IntegrateSection {
    std::optional<double> dt; // default: stability-guideline step for the grid
    std::optional<double> t_final;
    std::optional<double> tau_final;
    int snapshot_stride = 0;
};

struct OutputSection {
    std::string directory = ".";
};

struct ReduceSection {
    std::vector<double> epsilons;
    double tau_final = 0.5;
    double l0 = 1.0;
    int points_per_slow_unit = 16;
    int fast_n = 0;
    double mnls_dt_coeff = 0.2;
    double mnls_dt_power = 1.5;
    double kdv_dt = 1e-3;
};

struct RunConfig {
    std::optional<GridSection> grid;
    std::optional<CouplingSection> coupling;
    std::optional<EnsembleSection> ensemble;
    std::optional<DegenerateSection> degenerate;
    std::optional<InitialSection> initial;
    std::optional<IntegrateSection> integrate;
    std::optional<ReduceSection> reduce;
    OutputSection output;
};

enum class ConfigFormat { Json, Toml };

// Parses and validates; throws SchemaError carrying every violation found
// (unknown keys, type errors, and section invariants such as the stability
// condition h < min g or the rank-one value of s2).
RunConfig parse_config(const std::string& text, ConfigFormat fmt);

// Format detected from the .json / .toml extension.
RunConfig parse_config_file(const std::string& path);

} // namespace ckdv
