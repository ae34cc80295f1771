#include "ckdv/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "ckdv/config.hpp"
#include "ckdv/coupling.hpp"
#include "ckdv/csv.hpp"
#include "ckdv/eigenstructure.hpp"
#include "ckdv/kdv.hpp"
#include "ckdv/kernels.hpp"
#include "ckdv/mnls.hpp"
#include "ckdv/reduction.hpp"

namespace ckdv::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitVerification = 2;

fs::path output_dir(const RunConfig& cfg) {
    const char* env = std::getenv("CKDV_OUTPUT_DIR");
    fs::path dir = env && *env ? fs::path(env) : fs::path(cfg.output.directory);
    fs::create_directories(dir);
    return dir;
}

void require(bool cond, const std::string& message) {
    if (!cond) throw SchemaError({message});
}

CouplingSet coupling_from(const CouplingSection& c) {
    Weights w{c.weights};
    if (c.mnls) {
        const double s = mnls_symmetric_value(w);
        return build_universal(w, SymmetricPair{s, s});
    }
    return build_universal(w, SymmetricPair{*c.s1, *c.s2});
}

DegenerateSetup degenerate_from(const DegenerateSection& d) {
    return degenerate_ensemble(d.lambda_star, d.h, Weights{d.weights}, d.rho_ref, d.extras);
}

RealField build_profile(const ProfileSpec& p, const PeriodicGrid& g) {
    const double x0 = p.x0.value_or(g.length / 2.0);
    if (p.type == "soliton") {
        return make_field(g, [&](double x) {
            const double s = 1.0 / std::cosh(p.kappa * wrapped_distance(g, x, x0));
            return 2.0 * p.kappa * p.kappa * s * s;
        });
    }
    if (p.type == "gaussian") {
        return make_field(g, [&](double x) {
            const double d = wrapped_distance(g, x, x0);
            return p.amplitude * std::exp(-d * d / (2.0 * p.sigma * p.sigma));
        });
    }
    if (p.type == "dipole") {
        // derivative-of-Gaussian bump: localized, zero mean, peak |amplitude|
        return make_field(g, [&](double x) {
            const double d = wrapped_distance(g, x, x0);
            return -p.amplitude * (d / p.sigma) *
                   std::exp(0.5 - d * d / (2.0 * p.sigma * p.sigma));
        });
    }
    if (p.type == "from_file") {
        const CsvTable t = read_csv(p.path);
        if (static_cast<int>(t.rows.size()) != g.n)
            throw Error(p.path + ": expected " + std::to_string(g.n) + " rows");
        if (p.column < 1 || p.column >= static_cast<int>(t.header.size()))
            throw Error(p.path + ": column " + std::to_string(p.column) + " out of range");
        RealField f{g, std::vector<double>(g.n)};
        for (int i = 0; i < g.n; ++i) f.v[i] = t.rows[i][p.column];
        return f;
    }
    throw Error("unknown profile type '" + p.type + "'");
}

std::vector<RealField> build_profiles(const std::vector<ProfileSpec>& specs,
                                      const PeriodicGrid& g, int m, const char* what) {
    std::vector<RealField> out;
    if (static_cast<int>(specs.size()) == m) {
        for (const auto& p : specs) out.push_back(build_profile(p, g));
    } else if (specs.size() == 1) {
        for (int j = 0; j < m; ++j) out.push_back(build_profile(specs[0], g));
    } else {
        throw SchemaError({std::string(what) + ": expected 1 or " + std::to_string(m) +
                           " profiles, got " + std::to_string(specs.size())});
    }
    return out;
}

void write_fields_csv(const fs::path& path, const MkdvState& s) {
    CsvWriter w(path);
    std::vector<std::string> names{"x"};
    for (int j = 1; j <= s.m(); ++j) names.push_back("u" + std::to_string(j));
    w.header(names);
    std::vector<double> row(1 + s.m());
    for (int i = 0; i < s.grid().n; ++i) {
        row[0] = s.grid().x(i);
        for (int j = 0; j < s.m(); ++j) row[1 + j] = s.fields[j].v[i];
        w.row(row);
    }
}

void write_psi_csv(const fs::path& path, const MnlsState& s) {
    CsvWriter w(path);
    std::vector<std::string> names{"x"};
    for (int k = 1; k <= s.count(); ++k) {
        names.push_back("re_psi" + std::to_string(k));
        names.push_back("im_psi" + std::to_string(k));
    }
    w.header(names);
    std::vector<double> row(1 + 2 * s.count());
    for (int i = 0; i < s.grid().n; ++i) {
        row[0] = s.grid().x(i);
        for (int k = 0; k < s.count(); ++k) {
            row[1 + 2 * k] = s.psi[k].v[i].real();
            row[2 + 2 * k] = s.psi[k].v[i].imag();
        }
        w.row(row);
    }
}

std::string snapshot_name(const char* stem, int idx) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%04d.csv", stem, idx);
    return buf;
}

// ---- coupling check -----------------------------------------------------

int cmd_coupling_check(const std::vector<double>& weights, std::optional<double> s1,
                       std::optional<double> s2, bool mnls) {
    CouplingSection sec;
    sec.weights = weights;
    sec.s1 = s1;
    sec.s2 = s2;
    sec.mnls = mnls;
    require(mnls || (s1 && s2), "coupling check: give --mnls or both --s1 and --s2");
    require(!(mnls && (s1 || s2)), "coupling check: --mnls excludes --s1/--s2");

    const CouplingSet c = coupling_from(sec);
    const ResidualReport rep = verify_consistency(c);
    const int m = c.m();

    std::cout << "tensor,index,value\n";
    auto emit = [](const std::string& tensor, const std::string& idx, double v) {
        std::cout << tensor << ',' << idx << ',' << format_double(v) << '\n';
    };
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
            emit("N", std::to_string(p + 1) + "." + std::to_string(q + 1), c.n_tensor(p, q));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            emit("L", std::to_string(i + 1) + "." + std::to_string(j + 1), c.l_matrix(i, j));
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
            for (int j = 0; j < m; ++j)
                emit("R",
                     std::to_string(p + 1) + "." + std::to_string(q + 1) + "." +
                         std::to_string(j + 1),
                     c.r_tensor(p, q, j));
    emit("residual", "eq_inverse", rep.eq_inverse);
    emit("residual", "eq_product", rep.eq_product);
    emit("residual", "symmetry", rep.symmetry);
    emit("residual", "column_sum", rep.column_sum);
    return rep.pass() ? kExitOk : kExitVerification;
}

// ---- kdv run ------------------------------------------------------------

int cmd_kdv_run(const RunConfig& cfg) {
    require(cfg.grid.has_value(), "kdv run: grid section required");
    require(cfg.coupling.has_value(), "kdv run: coupling section required");
    require(cfg.initial.has_value() && !cfg.initial->profiles.empty(),
            "kdv run: initial profiles required");
    require(cfg.integrate.has_value() && cfg.integrate->t_final.has_value(),
            "kdv run: integrate.t_final required");

    const PeriodicGrid g = make_grid(cfg.grid->length, cfg.grid->n);
    const CouplingSet c = coupling_from(*cfg.coupling);
    const fs::path dir = output_dir(cfg);

    IntegratorConfig icfg;
    icfg.dt = cfg.integrate->dt.value_or(guideline_dt(g));
    icfg.snapshot_stride = cfg.integrate->snapshot_stride;

    MkdvState s0;
    s0.fields = build_profiles(cfg.initial->profiles, g, c.m(), "initial");

    CsvWriter inv(dir / "invariants.csv");
    const std::string names[] = {"t", "P", "H"};
    inv.header(names);
    int snap = 0;
    evolve(s0, c, *cfg.integrate->t_final, icfg, [&](const MkdvState& s) {
        write_fields_csv(dir / snapshot_name("fields", snap++), s);
        const double row[] = {s.time, momentum(s, c), hamiltonian(s, c)};
        inv.row(row);
    });
    return kExitOk;
}

// ---- mnls run -----------------------------------------------------------

int cmd_mnls_run(const RunConfig& cfg) {
    require(cfg.grid.has_value(), "mnls run: grid section required");
    require(cfg.ensemble.has_value() || cfg.degenerate.has_value(),
            "mnls run: ensemble or degenerate section required");
    require(cfg.initial.has_value() && cfg.initial->plane_wave,
            "mnls run: initial.plane_wave = true required");
    require(cfg.integrate.has_value() && cfg.integrate->t_final.has_value(),
            "mnls run: integrate.t_final required");

    const PeriodicGrid g = make_grid(cfg.grid->length, cfg.grid->n);
    std::optional<DegenerateSetup> setup;
    CondensateEnsemble e;
    if (cfg.degenerate) {
        setup = degenerate_from(*cfg.degenerate);
        e = setup->ensemble;
    } else {
        e = make_ensemble(cfg.ensemble->rho0, cfg.ensemble->g, cfg.ensemble->h);
    }

    MnlsState s0;
    if (cfg.initial->perturbation) {
        require(setup.has_value(), "mnls run: perturbation requires the degenerate section");
        const auto& pert = *cfg.initial->perturbation;
        const PeriodicGrid slow = make_grid(pert.slow_grid.length, pert.slow_grid.n);
        const auto f0 = build_profiles(pert.f0, slow, setup->multiplicity, "initial.perturbation.f0");
        const auto zeroth = zeroth_order_state(f0, *setup);
        s0 = embed_perturbation(*setup, zeroth.delta_rho, zeroth.delta_v, pert.epsilon, g);
    } else {
        s0 = plane_wave(e, cfg.initial->theta_bar, 0.0, g);
    }
    if (!cfg.initial->theta_bar.empty() && cfg.initial->perturbation) {
        require(static_cast<int>(cfg.initial->theta_bar.size()) == e.count(),
                "mnls run: theta_bar size must match component count");
        for (int k = 0; k < e.count(); ++k) {
            const cplx rot(std::cos(cfg.initial->theta_bar[k]),
                           std::sin(cfg.initial->theta_bar[k]));
            for (auto& v : s0.psi[k].v) v *= rot;
        }
    }

    // default dt from the phase-rate guideline dt * max_k sum_j alpha_kj rho_j << 1
    double dt;
    if (cfg.integrate->dt) {
        dt = *cfg.integrate->dt;
    } else {
        const Eigen::MatrixXd a = alpha_matrix(e);
        double rate = 0.0;
        for (int k = 0; k < e.count(); ++k) {
            double r = 0.0;
            for (int j = 0; j < e.count(); ++j) r += a(k, j) * e.rho0[j];
            rate = std::max(rate, std::abs(r));
        }
        dt = rate > 0.0 ? 0.1 / rate : 1e-2;
    }

    const fs::path dir = output_dir(cfg);
    CsvWriter massw(dir / "mass.csv");
    std::vector<std::string> names{"t"};
    for (int k = 1; k <= e.count(); ++k) names.push_back("mass" + std::to_string(k));
    massw.header(names);

    int snap = 0;
    evolve_mnls(s0, e, *cfg.integrate->t_final, dt, cfg.integrate->snapshot_stride,
                [&](const MnlsState& s) {
                    write_psi_csv(dir / snapshot_name("psi", snap++), s);
                    std::vector<double> row{s.time};
                    for (double mk : mass(s)) row.push_back(mk);
                    massw.row(row);
                });
    return kExitOk;
}

// ---- spectrum analyze ---------------------------------------------------

int cmd_spectrum_analyze(const RunConfig& cfg) {
    require(cfg.ensemble.has_value() || cfg.degenerate.has_value(),
            "spectrum analyze: ensemble or degenerate section required");

    std::optional<DegenerateSetup> setup;
    CondensateEnsemble e;
    if (cfg.degenerate) {
        setup = degenerate_from(*cfg.degenerate);
        e = setup->ensemble;
    } else {
        e = make_ensemble(cfg.ensemble->rho0, cfg.ensemble->g, cfg.ensemble->h);
    }

    const SpectralStructure s = setup ? decompose_with_closed_basis(*setup) : decompose(e);
    const int n = e.count();

    std::cout << "quantity,index,value\n";
    auto emit = [](const std::string& q, const std::string& idx, double v) {
        std::cout << q << ',' << idx << ',' << format_double(v) << '\n';
    };
    for (int i = 0; i < n; ++i) emit("lambda_sq", std::to_string(i + 1), s.lambda_sq(i));
    for (int i = 0; i < n; ++i)
        emit("multiplicity", std::to_string(i + 1),
             count_multiplicity(s.lambda_sq, s.lambda_sq(i)));

    const Eigen::MatrixXd a = build_a(e);
    Eigen::VectorXd lambda(n);
    for (int i = 0; i < n; ++i) lambda(i) = std::sqrt(s.lambda_sq(i));
    Eigen::MatrixXd lt(2 * n, 2 * n);
    lt.setZero();
    lt.topLeftCorner(n, n) = lambda.asDiagonal();
    lt.bottomRightCorner(n, n) = (-lambda).asDiagonal();
    const double scale = s.v_matrix.cwiseAbs().maxCoeff();
    const double r_decomp = (a * s.v_matrix - s.v_matrix * lt).cwiseAbs().maxCoeff() / scale;
    const double r_biorth =
        (s.v_matrix.transpose() * s.v_inv_t - Eigen::MatrixXd::Identity(2 * n, 2 * n))
            .cwiseAbs()
            .maxCoeff();
    emit("residual", "decomposition", r_decomp);
    emit("residual", "biorthogonality", r_biorth);
    emit("condition", "l_gram", s.l_gram_condition);
    if (s.l_gram_condition > 1e8)
        std::cerr << "warning: Q^T rho Q condition number exceeds 1e8\n";

    bool pass = r_decomp < 1e-10 && r_biorth < 1e-10;

    if (setup) {
        const auto& d = *setup;
        const Eigen::MatrixXd alpha_rho =
            alpha_matrix(e) * Eigen::Map<const Eigen::VectorXd>(e.rho0.data(), n).asDiagonal();
        const Eigen::MatrixXd qd = degenerate_eigenvectors(d);
        const double ls2 = d.lambda_star * d.lambda_star;
        const double r_evec =
            (alpha_rho * qd - ls2 * qd).cwiseAbs().maxCoeff() / qd.cwiseAbs().maxCoeff() / ls2;
        const auto [ltil, ltil_inv] = ltilde_and_inverse(d);
        const double r_ltinv =
            (ltil * ltil_inv - Eigen::MatrixXd::Identity(d.multiplicity, d.multiplicity))
                .cwiseAbs()
                .maxCoeff();
        // closed-form QL^-1 columns against the numerically assembled ones
        const Eigen::MatrixXd qli_num =
            s.q_matrix * s.l_gram.inverse();
        const double r_qli =
            (ql_inverse_columns(d) - qli_num.leftCols(d.multiplicity)).cwiseAbs().maxCoeff();
        // scale bridge to the universal L
        const double su = mnls_symmetric_value(d.weights);
        const CouplingSet cu = build_universal(d.weights, SymmetricPair{su, su});
        const double factor = d.rho_ref * (1.0 + d.weights.sum());
        const double r_bridge = (ltil - factor * cu.l_matrix).cwiseAbs().maxCoeff();

        emit("residual", "eigenvector_closed_form", r_evec);
        emit("residual", "ltilde_inverse", r_ltinv);
        emit("residual", "ql_columns", r_qli);
        emit("residual", "scale_bridge", r_bridge);
        pass = pass && r_evec < 1e-12 && r_ltinv < 1e-12 && r_qli < 1e-12 && r_bridge < 1e-12;
    }
    return pass ? kExitOk : kExitVerification;
}

// ---- reduce verify ------------------------------------------------------

int cmd_reduce_verify(const RunConfig& cfg, const std::vector<double>& epsilons_flag) {
    require(cfg.degenerate.has_value(), "reduce verify: degenerate section required");
    require(cfg.grid.has_value(), "reduce verify: grid section (the slow grid) required");
    require(cfg.initial.has_value() && !cfg.initial->profiles.empty(),
            "reduce verify: initial profiles (f0) required");

    ReductionExperiment ex;
    ex.setup = degenerate_from(*cfg.degenerate);
    ex.slow_grid = make_grid(cfg.grid->length, cfg.grid->n);
    ex.f0 = build_profiles(cfg.initial->profiles, ex.slow_grid, ex.setup.multiplicity, "initial");

    std::vector<double> epsilons = epsilons_flag;
    if (cfg.reduce) {
        const auto& r = *cfg.reduce;
        ex.tau_final = r.tau_final;
        ex.l0 = r.l0;
        ex.points_per_slow_unit = r.points_per_slow_unit;
        ex.fast_n_override = r.fast_n;
        ex.mnls_dt_coeff = r.mnls_dt_coeff;
        ex.mnls_dt_power = r.mnls_dt_power;
        ex.kdv_dt = r.kdv_dt;
        if (epsilons.empty()) epsilons = r.epsilons;
    }
    require(!epsilons.empty(), "reduce verify: epsilons required (--epsilons or reduce.epsilons)");

    const fs::path dir = output_dir(cfg);
    const ConvergenceResult res = convergence_study(ex, epsilons);

    {
        CsvWriter w(dir / "convergence.csv");
        const std::string names[] = {"epsilon", "error", "order"};
        w.header(names);
        for (const auto& p : res.points) {
            const double row[] = {p.epsilon, p.error, p.observed_order};
            w.row(row);
        }
    }
    for (std::size_t i = 0; i < res.points.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "profiles_eps%g.csv", res.points[i].epsilon);
        CsvWriter w(dir / buf);
        std::vector<std::string> names{"xi"};
        for (int j = 1; j <= ex.setup.multiplicity; ++j)
            names.push_back("f_extracted_" + std::to_string(j));
        for (int j = 1; j <= ex.setup.multiplicity; ++j)
            names.push_back("f_kdv_" + std::to_string(j));
        w.header(names);
        std::vector<double> row(1 + 2 * ex.setup.multiplicity);
        for (int p = 0; p < ex.slow_grid.n; ++p) {
            row[0] = ex.slow_grid.x(p);
            for (int j = 0; j < ex.setup.multiplicity; ++j) {
                row[1 + j] = res.f_extracted[i][j].v[p];
                row[1 + ex.setup.multiplicity + j] = res.f_kdv[j].v[p];
            }
            w.row(row);
        }
    }

    for (const auto& p : res.points)
        std::cout << "epsilon=" << format_double(p.epsilon) << " error=" << format_double(p.error)
                  << " order=" << format_double(p.observed_order) << '\n';
    return res.monotone_decreasing ? kExitOk : kExitVerification;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"ckdv: coupled KdV and multi-component NLS spectral laboratory"};
    app.require_subcommand(1);

    bool serial = false;
    app.add_flag("--serial", serial, "disable OpenMP kernels (serial reference path)");
    long seed = 0;
    app.add_option("--seed", seed, "reserved; core paths are deterministic")->group("");

    auto* coupling = app.add_subcommand("coupling", "coupling tensor tools");
    coupling->require_subcommand(1);
    auto* check = coupling->add_subcommand("check", "build tensors and verify consistency");
    std::vector<double> weights;
    std::optional<double> s1, s2;
    bool mnls_flag = false;
    check->add_option("--weights", weights, "weights w1,w2,...")->required()->delimiter(',');
    check->add_option("--s1", s1, "first symmetric value");
    check->add_option("--s2", s2, "second symmetric value");
    check->add_flag("--mnls", mnls_flag, "use s1 = s2 = (1 + sum w)^-1");

    auto* kdv = app.add_subcommand("kdv", "coupled KdV integration");
    kdv->require_subcommand(1);
    auto* kdv_run = kdv->add_subcommand("run", "integrate a config-defined system");
    std::string kdv_config;
    kdv_run->add_option("--config", kdv_config, "config file (.json or .toml)")->required();

    auto* mnls = app.add_subcommand("mnls", "multi-component NLS integration");
    mnls->require_subcommand(1);
    auto* mnls_run = mnls->add_subcommand("run", "integrate a config-defined system");
    std::string mnls_config;
    mnls_run->add_option("--config", mnls_config, "config file (.json or .toml)")->required();

    auto* spectrum = app.add_subcommand("spectrum", "linearized wave structure");
    spectrum->require_subcommand(1);
    auto* analyze = spectrum->add_subcommand("analyze", "eigenvalues and closed-form residuals");
    std::string spectrum_config;
    analyze->add_option("--config", spectrum_config, "config file (.json or .toml)")->required();

    auto* reduce = app.add_subcommand("reduce", "MNLS -> coupled KdV reduction");
    reduce->require_subcommand(1);
    auto* verify = reduce->add_subcommand("verify", "epsilon-convergence study");
    std::string reduce_config;
    std::vector<double> epsilons;
    verify->add_option("--config", reduce_config, "config file (.json or .toml)")->required();
    verify->add_option("--epsilons", epsilons, "override epsilon list")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (serial) kernels::set_parallel(false);

    try {
        if (check->parsed()) return cmd_coupling_check(weights, s1, s2, mnls_flag);
        if (kdv_run->parsed()) return cmd_kdv_run(parse_config_file(kdv_config));
        if (mnls_run->parsed()) return cmd_mnls_run(parse_config_file(mnls_config));
        if (analyze->parsed()) return cmd_spectrum_analyze(parse_config_file(spectrum_config));
        if (verify->parsed()) return cmd_reduce_verify(parse_config_file(reduce_config), epsilons);
    } catch (const SchemaError& e) {
        std::cerr << e.what() << '\n';
        return kExitRuntime;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("ckdv");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

} // namespace ckdv::cli
