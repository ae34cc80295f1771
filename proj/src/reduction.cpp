#include "ckdv/reduction.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ckdv/fft.hpp"
#include "ckdv/ifrk4.hpp"
#include "ckdv/kernels.hpp"

namespace ckdv {

namespace {

constexpr double kPi = std::numbers::pi;

void check_f_fields(const std::vector<RealField>& f, const DegenerateSetup& d) {
    if (static_cast<int>(f.size()) != d.multiplicity)
        throw DimensionMismatch("expected one f field per degenerate mode");
    for (const auto& fj : f) check_same_grid(f[0].grid, fj.grid);
}

double max_abs_field(const RealField& f) {
    return kernels::max_abs(std::span<const double>(f.v));
}

// middle-third localization: wraparound and mean-offset effects stay below
// tolerance only for profiles that die out inside the central third
void check_localized(const RealField& f) {
    const double peak = max_abs_field(f);
    if (peak == 0.0) return;
    const double lo = f.grid.length / 3.0, hi = 2.0 * f.grid.length / 3.0;
    for (int i = 0; i < f.grid.n; ++i) {
        const double x = f.grid.x(i);
        if ((x < lo || x >= hi) && std::abs(f.v[i]) > 1e-10 * peak)
            throw Error("initial profile is not localized within the middle third of the domain");
    }
}

} // namespace

ZerothOrderPerturbation zeroth_order_state(const std::vector<RealField>& f,
                                           const DegenerateSetup& d) {
    check_f_fields(f, d);
    const PeriodicGrid g = f[0].grid;
    const int n_cond = d.ensemble.count();
    const int m = d.multiplicity;
    const double inv_ls = 1.0 / d.lambda_star;

    ZerothOrderPerturbation out;
    out.delta_rho.assign(n_cond, zero_field(g));
    out.delta_v.assign(n_cond, zero_field(g));

    for (int j = 0; j < m; ++j) {
        const double wj = d.weights.w[j];
        for (int i = 0; i < g.n; ++i) {
            out.delta_rho[j].v[i] = -inv_ls * d.rho_ref * wj * f[j].v[i];
            out.delta_v[j].v[i] = -f[j].v[i];
        }
    }
    const int ref = d.m_hat() - 1;
    for (int k = 0; k < m; ++k) {
        const double wk = d.weights.w[k];
        for (int i = 0; i < g.n; ++i) {
            out.delta_rho[ref].v[i] += inv_ls * d.rho_ref * wk * f[k].v[i];
            out.delta_v[ref].v[i] += wk * f[k].v[i];
        }
    }
    return out;
}

MnlsState embed_perturbation(const DegenerateSetup& d, const std::vector<RealField>& delta_rho,
                             const std::vector<RealField>& delta_v, double epsilon,
                             const PeriodicGrid& fast_grid) {
    const int n_cond = d.ensemble.count();
    if (static_cast<int>(delta_rho.size()) != n_cond ||
        static_cast<int>(delta_v.size()) != n_cond)
        throw DimensionMismatch("perturbation needs one (delta_rho, delta_v) pair per condensate");
    const PeriodicGrid slow = delta_rho[0].grid;
    for (int k = 0; k < n_cond; ++k) {
        check_same_grid(slow, delta_rho[k].grid);
        check_same_grid(slow, delta_v[k].grid);
    }
    if (std::abs(fast_grid.length * epsilon - slow.length) > 1e-9 * slow.length)
        throw DimensionMismatch("fast grid must cover slow length / epsilon");
    if (fast_grid.n < slow.n) throw Error("fast grid must not be coarser than the slow grid");

    const double eps2 = epsilon * epsilon;
    MnlsState s;
    s.time = 0.0;
    s.psi.reserve(n_cond);
    for (int k = 0; k < n_cond; ++k) {
        const double vmean = mean(delta_v[k]);
        const double vmax = max_abs_field(delta_v[k]);
        if (std::abs(vmean) > 1e-10 * std::max(1.0, vmax))
            throw NonzeroMeanVelocity("delta_v must have zero mean on the slow grid");

        // sample the slow-coordinate fields on the fast grid (pure spectral
        // zero-padding: fast point i sits at X = i * slow_length / n_fast)
        const RealField rho_slowcoord = resample(delta_rho[k], fast_grid.n);
        const RealField phi_slow = antiderivative(delta_v[k], 0.0);
        const RealField phi_fast = resample(phi_slow, fast_grid.n);

        ComplexField psi{fast_grid, std::vector<cplx>(fast_grid.n)};
        for (int i = 0; i < fast_grid.n; ++i) {
            const double rho = d.ensemble.rho0[k] + eps2 * rho_slowcoord.v[i];
            if (!(rho > 0.0))
                throw NegativeDensity("embedded density is not positive; epsilon too large");
            const double phi = epsilon * phi_fast.v[i];
            psi.v[i] = std::sqrt(rho) * cplx(std::cos(phi), std::sin(phi));
        }
        s.psi.push_back(std::move(psi));
    }
    return s;
}

std::vector<RealField> extract_f(const MnlsState& state, const DegenerateSetup& d, double epsilon,
                                 double t, const PeriodicGrid& slow_grid) {
    const int n_cond = d.ensemble.count();
    if (state.count() != n_cond)
        throw DimensionMismatch("state and degenerate setup component counts differ");
    const PeriodicGrid fast = state.grid();
    if (std::abs(fast.length * epsilon - slow_grid.length) > 1e-9 * slow_grid.length)
        throw DimensionMismatch("state grid does not match slow length / epsilon");

    const HydroFields hf = madelung(state);
    const double inv_eps2 = 1.0 / (epsilon * epsilon);
    const double shift = d.lambda_star * epsilon * t; // +lambda* T in slow units

    // restrict to the slow grid and move to the co-moving frame
    std::vector<RealField> drho(n_cond), dv(n_cond);
    for (int k = 0; k < n_cond; ++k) {
        RealField r{fast, std::vector<double>(fast.n)};
        for (int i = 0; i < fast.n; ++i)
            r.v[i] = (hf.rho[k].v[i] - d.ensemble.rho0[k]) * inv_eps2;
        RealField w{fast, std::vector<double>(fast.n)};
        for (int i = 0; i < fast.n; ++i) w.v[i] = hf.v[k].v[i] * inv_eps2;

        for (RealField* fld : {&r, &w}) {
            auto hat = resize_spectrum(spectrum(*fld), slow_grid.n);
            for (int j = 0; j < slow_grid.n; ++j) {
                const double kappa = slow_grid.wavenumber(j);
                if (j == slow_grid.n / 2)
                    hat[j] *= std::cos(kappa * shift);
                else
                    hat[j] *= cplx(std::cos(kappa * shift), std::sin(kappa * shift));
            }
            *fld = field_from_spectrum(slow_grid, hat);
        }
        drho[k] = std::move(r);
        dv[k] = std::move(w);
    }

    // degenerate-branch rows of V^-T: f_j = 1/2 lambda* sum_i W_ij drho_i
    //                                     + 1/2 sum_i rho0_i W_ij dv_i
    const Eigen::MatrixXd w_cols = ql_inverse_columns(d);
    std::vector<RealField> f(d.multiplicity, zero_field(slow_grid));
    for (int j = 0; j < d.multiplicity; ++j)
        for (int i = 0; i < n_cond; ++i) {
            const double cr = 0.5 * d.lambda_star * w_cols(i, j);
            const double cv = 0.5 * d.ensemble.rho0[i] * w_cols(i, j);
            if (cr == 0.0 && cv == 0.0) continue;
            for (int p = 0; p < slow_grid.n; ++p)
                f[j].v[p] += cr * drho[i].v[p] + cv * dv[i].v[p];
        }
    return f;
}

std::vector<RealField> evolve_coupled_kdv_physical(const std::vector<RealField>& f0,
                                                   const DegenerateSetup& d, double tau_final,
                                                   const IntegratorConfig& cfg) {
    check_f_fields(f0, d);
    if (!(cfg.dt > 0.0)) throw Error("dt must be positive");
    const PeriodicGrid g = f0[0].grid;
    const int m = d.multiplicity;
    const double s = mnls_symmetric_value(d.weights);
    const std::vector<double>& w = d.weights.w;

    // linear symbol of (1/(8 lambda*)) f''' : (ik)^3/(8 lambda*) = -i k^3/(8 lambda*)
    std::vector<cplx> lin(g.n);
    for (int k = 0; k < g.n; ++k) {
        const double kw = g.wavenumber(k);
        lin[k] = cplx(0.0, -kw * kw * kw / (8.0 * d.lambda_star));
    }

    auto rhs = [&](const std::vector<std::vector<cplx>>& fhat,
                   std::vector<std::vector<cplx>>& out) {
        const auto fine = detail::fine_fields(g, fhat, cfg.dealias);
        const int fine_n = static_cast<int>(fine[0].size());
        std::vector<const double*> fp(m);
        for (int j = 0; j < m; ++j) fp[j] = fine[j].data();

        std::vector<double> wsum(fine_n);
        kernels::real_lincomb(wsum, w, fp);
        std::vector<double> wsq_coeff(m * m, 0.0);
        for (int j = 0; j < m; ++j) wsq_coeff[j * m + j] = w[j];
        std::vector<double> wsq(fine_n);
        kernels::quadratic_form(wsq, wsq_coeff, fp, m);

        for (int j = 0; j < m; ++j) {
            std::vector<cplx> b(fine_n);
            for (int i = 0; i < fine_n; ++i) {
                const double flux = -0.75 * s * (wsum[i] * wsum[i] + wsq[i]) +
                                    0.75 * fine[j][i] * fine[j][i];
                b[i] = flux;
            }
            fft::forward_inplace(b);
            auto hat = resize_spectrum(b, g.n);
            for (int k = 0; k < g.n; ++k) hat[k] *= cplx(0.0, g.wavenumber(k));
            hat[g.n / 2] = cplx(0.0, 0.0);
            out[j] = std::move(hat);
        }
    };

    const long long nsteps =
        tau_final == 0.0 ? 0 : std::max<long long>(1, std::llround(std::abs(tau_final) / cfg.dt));
    const double dt = tau_final == 0.0 ? cfg.dt : tau_final / nsteps;
    IfRk4 stepper(std::move(lin), m);

    std::vector<std::vector<cplx>> fhat(m);
    for (int j = 0; j < m; ++j) fhat[j] = spectrum(f0[j]);
    for (long long step = 0; step < nsteps; ++step) stepper.step(fhat, dt, rhs);

    std::vector<RealField> out;
    out.reserve(m);
    for (int j = 0; j < m; ++j) out.push_back(field_from_spectrum(g, fhat[j]));
    return out;
}

std::pair<std::vector<RealField>, ScaleMap> rescale_to_standard(const std::vector<RealField>& f,
                                                                double lambda_star, double l0) {
    if (!(lambda_star > 0.0) || !(l0 > 0.0)) throw Error("lambda_star and l0 must be positive");
    ScaleMap map{lambda_star, l0};
    std::vector<RealField> u;
    u.reserve(f.size());
    for (const auto& fj : f) {
        RealField uj{PeriodicGrid{fj.grid.length / l0, fj.grid.n}, fj.v};
        for (auto& v : uj.v) v *= map.amplitude();
        u.push_back(std::move(uj));
    }
    return {std::move(u), map};
}

std::vector<RealField> unrescale_from_standard(const std::vector<RealField>& u,
                                               const ScaleMap& map) {
    std::vector<RealField> f;
    f.reserve(u.size());
    for (const auto& uj : u) {
        RealField fj{PeriodicGrid{uj.grid.length * map.l0, uj.grid.n}, uj.v};
        for (auto& v : fj.v) v /= map.amplitude();
        f.push_back(std::move(fj));
    }
    return f;
}

int fast_grid_size(const ReductionExperiment& ex) {
    if (ex.fast_n_override > 0) return ex.fast_n_override;
    const double needed = ex.points_per_slow_unit * ex.slow_grid.length;
    int n = ex.slow_grid.n;
    while (n < needed) n *= 2;
    return n;
}

ConvergenceResult convergence_study(const ReductionExperiment& ex,
                                    std::span<const double> epsilons) {
    if (epsilons.size() < 3) throw Error("convergence study needs at least 3 epsilon values");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1])) throw Error("epsilons must decrease strictly");
    check_f_fields(ex.f0, ex.setup);
    for (const auto& fj : ex.f0) {
        check_same_grid(ex.slow_grid, fj.grid);
        check_localized(fj);
    }

    ConvergenceResult res;
    res.f_kdv = evolve_coupled_kdv_physical(ex.f0, ex.setup, ex.tau_final,
                                            IntegratorConfig{ex.kdv_dt, true, 0});
    double ref_amp = 0.0;
    for (const auto& fj : res.f_kdv) ref_amp = std::max(ref_amp, max_abs_field(fj));

    const int n_fast = fast_grid_size(ex);
    const auto zeroth = zeroth_order_state(ex.f0, ex.setup);

    for (double eps : epsilons) {
        const PeriodicGrid fast_grid = make_grid(ex.slow_grid.length / eps, n_fast);
        MnlsState psi0 =
            embed_perturbation(ex.setup, zeroth.delta_rho, zeroth.delta_v, eps, fast_grid);

        const double t_final = ex.tau_final / (eps * eps * eps);
        // keep dt below the split-step resonance threshold dt k_max^2 / 2 = pi
        const double kmax = kPi * n_fast / fast_grid.length;
        const double dt_cap = 0.8 * 2.0 * kPi / (kmax * kmax);
        const double dt = std::min(ex.mnls_dt_coeff * std::pow(eps, ex.mnls_dt_power), dt_cap);
        MnlsState final_state;
        evolve_mnls(psi0, ex.setup.ensemble, t_final, dt, 0,
                    [&](const MnlsState& s) { final_state = s; });

        auto f_ext = extract_f(final_state, ex.setup, eps, final_state.time, ex.slow_grid);

        double err = 0.0;
        for (int j = 0; j < ex.setup.multiplicity; ++j)
            for (int i = 0; i < ex.slow_grid.n; ++i)
                err = std::max(err, std::abs(f_ext[j].v[i] - res.f_kdv[j].v[i]));
        if (ref_amp > 1e-14) err /= ref_amp;

        ConvergencePoint pt;
        pt.epsilon = eps;
        pt.error = err;
        pt.observed_order = std::numeric_limits<double>::quiet_NaN();
        if (!res.points.empty()) {
            const auto& prev = res.points.back();
            pt.observed_order = std::log(prev.error / err) / std::log(prev.epsilon / eps);
        }
        res.points.push_back(pt);
        res.f_extracted.push_back(std::move(f_ext));
    }

    res.monotone_decreasing = true;
    for (std::size_t i = 1; i < res.points.size(); ++i)
        if (!(res.points[i].error < res.points[i - 1].error)) res.monotone_decreasing = false;
    return res;
}

} // namespace ckdv
