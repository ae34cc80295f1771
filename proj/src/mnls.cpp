#include "ckdv/mnls.hpp"

#include <algorithm>
#include <cmath>

#include "ckdv/fft.hpp"
#include "ckdv/kdv.hpp"
#include "ckdv/kernels.hpp"

namespace ckdv {

namespace {

void check_state(const MnlsState& s) {
    if (s.count() == 0) throw DimensionMismatch("state has no components");
    for (const auto& f : s.psi) check_same_grid(s.grid(), f.grid);
}

void check_pair(const MnlsState& s, const CondensateEnsemble& e) {
    check_state(s);
    if (s.count() != e.count())
        throw DimensionMismatch("state and ensemble component counts differ");
}

} // namespace

CondensateEnsemble make_ensemble(std::vector<double> rho0, std::vector<double> g, double h) {
    if (rho0.empty() || rho0.size() != g.size())
        throw DimensionMismatch("rho0 and g must be nonempty and equally sized");
    for (double r : rho0)
        if (!(r > 0.0)) throw Error("densities must be positive");
    for (double gi : g)
        if (!(gi > 0.0)) throw Error("self-couplings must be positive");
    if (!(h > 0.0)) throw Error("cross-coupling h must be positive");
    if (!(h < *std::min_element(g.begin(), g.end())))
        throw Error("stability requires h < min g_j");
    return CondensateEnsemble{std::move(rho0), std::move(g), h};
}

Eigen::MatrixXd alpha_matrix(const CondensateEnsemble& e) {
    const int n = e.count();
    Eigen::MatrixXd a(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) a(j, k) = e.h + (j == k ? e.g[j] - e.h : 0.0);
    return a;
}

MnlsState plane_wave(const CondensateEnsemble& e, const std::vector<double>& theta_bar, double t,
                     const PeriodicGrid& g) {
    const int n = e.count();
    if (!theta_bar.empty() && static_cast<int>(theta_bar.size()) != n)
        throw DimensionMismatch("theta_bar size must match ensemble");
    const Eigen::MatrixXd a = alpha_matrix(e);
    MnlsState s;
    s.time = t;
    s.psi.reserve(n);
    for (int k = 0; k < n; ++k) {
        double rate = 0.0;
        for (int j = 0; j < n; ++j) rate += a(k, j) * e.rho0[j];
        const double theta = (theta_bar.empty() ? 0.0 : theta_bar[k]) - t * rate;
        const cplx value = std::sqrt(e.rho0[k]) * cplx(std::cos(theta), std::sin(theta));
        s.psi.push_back(ComplexField{g, std::vector<cplx>(g.n, value)});
    }
    return s;
}

namespace {

// one application of the nonlinear phase substep over time delta
void nonlinear_substep(std::vector<ComplexField>& psi, const Eigen::MatrixXd& alpha,
                       double delta, std::vector<std::vector<double>>& dens,
                       std::vector<double>& phase) {
    const int nc = static_cast<int>(psi.size());
    const int n = psi[0].grid.n;
    for (int j = 0; j < nc; ++j) kernels::abs2(dens[j], psi[j].v);
    std::vector<const double*> dp(nc);
    for (int j = 0; j < nc; ++j) dp[j] = dens[j].data();
    std::vector<double> coeff(nc);
    for (int k = 0; k < nc; ++k) {
        for (int j = 0; j < nc; ++j) coeff[j] = alpha(k, j);
        kernels::real_lincomb(phase, coeff, dp);
        kernels::phase_rotate(psi[k].v, std::span<const double>(phase.data(), n), -delta);
    }
}

void linear_substep(std::vector<ComplexField>& psi, const std::vector<cplx>& factor) {
    const int nc = static_cast<int>(psi.size());
    const bool par = kernels::parallel_enabled();
#pragma omp parallel for schedule(static) if (par)
    for (int j = 0; j < nc; ++j) {
        fft::forward_inplace(psi[j].v);
        kernels::cmul_serial(psi[j].v, factor);
        fft::inverse_inplace(psi[j].v);
    }
}

void check_finite(const std::vector<ComplexField>& psi) {
    for (const auto& f : psi) {
        const double mx = kernels::max_abs(std::span<const cplx>(f.v));
        if (!(mx <= kBlowUpThreshold)) throw BlowUp("MNLS state exceeded blow-up threshold");
    }
}

} // namespace

void evolve_mnls(const MnlsState& s0, const CondensateEnsemble& e, double t_final, double dt,
                 int snapshot_stride, const std::function<void(const MnlsState&)>& on_snapshot) {
    check_pair(s0, e);
    if (!(dt > 0.0) || !(t_final >= 0.0)) throw Error("evolve_mnls needs dt > 0 and t_final >= 0");
    const PeriodicGrid g = s0.grid();
    const Eigen::MatrixXd alpha = alpha_matrix(e);
    // land on t_final exactly with the nearest step count
    const long long nsteps = t_final == 0.0 ? 0 : std::max<long long>(1, std::llround(t_final / dt));
    if (nsteps > 0) dt = t_final / nsteps;

    std::vector<cplx> lin(g.n);
    for (int k = 0; k < g.n; ++k) {
        const double kw = g.wavenumber(k);
        const double th = -0.5 * kw * kw * dt;
        lin[k] = cplx(std::cos(th), std::sin(th));
    }

    MnlsState s = s0;
    std::vector<std::vector<double>> dens(s.count(), std::vector<double>(g.n));
    std::vector<double> phase(g.n);

    on_snapshot(s);
    if (nsteps == 0) return;

    // interior half-steps merge into full steps; split only around snapshots
    nonlinear_substep(s.psi, alpha, dt / 2.0, dens, phase);
    for (long long step = 1; step <= nsteps; ++step) {
        linear_substep(s.psi, lin);
        const bool boundary = step == nsteps ||
                              (snapshot_stride > 0 && step % snapshot_stride == 0);
        if (boundary) {
            nonlinear_substep(s.psi, alpha, dt / 2.0, dens, phase);
            check_finite(s.psi);
            s.time = s0.time + step * dt;
            on_snapshot(s);
            if (step < nsteps) nonlinear_substep(s.psi, alpha, dt / 2.0, dens, phase);
        } else {
            nonlinear_substep(s.psi, alpha, dt, dens, phase);
            if (step % 64 == 0) check_finite(s.psi);
        }
    }
}

std::vector<MnlsState> evolve_mnls(const MnlsState& s0, const CondensateEnsemble& e,
                                   double t_final, double dt) {
    std::vector<MnlsState> traj;
    evolve_mnls(s0, e, t_final, dt, 0, [&](const MnlsState& s) { traj.push_back(s); });
    return traj;
}

HydroFields madelung(const MnlsState& s) {
    check_state(s);
    const PeriodicGrid g = s.grid();
    HydroFields hf;
    hf.rho.reserve(s.count());
    hf.v.reserve(s.count());
    for (const auto& psi : s.psi) {
        RealField rho{g, std::vector<double>(g.n)};
        kernels::abs2(rho.v, psi.v);
        for (double r : rho.v)
            if (!(r > kVacuumThreshold * kVacuumThreshold))
                throw VacuumPoint("|psi| below vacuum threshold; phase undefined");
        const ComplexField dpsi = derivative(psi, 1);
        RealField v{g, std::vector<double>(g.n)};
        for (int i = 0; i < g.n; ++i)
            v.v[i] = std::imag(std::conj(psi.v[i]) * dpsi.v[i]) / rho.v[i];
        hf.rho.push_back(std::move(rho));
        hf.v.push_back(std::move(v));
    }
    return hf;
}

MnlsState synthesize(const HydroFields& hf, const std::vector<double>& ref_phase, double time) {
    const int nc = static_cast<int>(hf.rho.size());
    if (nc == 0 || hf.v.size() != hf.rho.size())
        throw DimensionMismatch("rho and v component counts differ");
    if (!ref_phase.empty() && static_cast<int>(ref_phase.size()) != nc)
        throw DimensionMismatch("ref_phase size must match component count");
    const PeriodicGrid g = hf.rho[0].grid;

    MnlsState s;
    s.time = time;
    s.psi.reserve(nc);
    for (int k = 0; k < nc; ++k) {
        check_same_grid(g, hf.rho[k].grid);
        check_same_grid(g, hf.v[k].grid);
        const double vmean = mean(hf.v[k]);
        const double vmax = kernels::max_abs(std::span<const double>(hf.v[k].v));
        if (std::abs(vmean) > 1e-10 * std::max(1.0, vmax))
            throw NonzeroMeanVelocity("velocity must have zero mean for a periodic phase");
        for (double r : hf.rho[k].v)
            if (!(r > 0.0)) throw NegativeDensity("density must be positive everywhere");
        const RealField phi = antiderivative(hf.v[k], ref_phase.empty() ? 0.0 : ref_phase[k]);
        ComplexField psi{g, std::vector<cplx>(g.n)};
        for (int i = 0; i < g.n; ++i)
            psi.v[i] = std::sqrt(hf.rho[k].v[i]) * cplx(std::cos(phi.v[i]), std::sin(phi.v[i]));
        s.psi.push_back(std::move(psi));
    }
    return s;
}

std::vector<double> mass(const MnlsState& s) {
    check_state(s);
    std::vector<double> out;
    out.reserve(s.count());
    for (const auto& psi : s.psi) {
        RealField d{psi.grid, std::vector<double>(psi.grid.n)};
        kernels::abs2(d.v, psi.v);
        out.push_back(integrate(d));
    }
    return out;
}

} // namespace ckdv
