#include "ckdv/kdv.hpp"

#include <cmath>
#include <numbers>

#include "ckdv/fft.hpp"
#include "ckdv/ifrk4.hpp"
#include "ckdv/kernels.hpp"

namespace ckdv {

namespace {

constexpr double kPi = std::numbers::pi;

void check_state(const MkdvState& s, const CouplingSet& c) {
    if (s.m() == 0) throw DimensionMismatch("state has no fields");
    if (s.m() != c.m()) throw DimensionMismatch("state and coupling component counts differ");
    for (const auto& f : s.fields) check_same_grid(s.grid(), f.grid);
}

std::vector<const double*> ptrs(const std::vector<std::vector<double>>& v) {
    std::vector<const double*> p(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i].data();
    return p;
}

std::vector<double> row_major(const Eigen::MatrixXd& a, double scale = 1.0) {
    std::vector<double> out(a.rows() * a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out[i * a.cols() + j] = scale * a(i, j);
    return out;
}

// i*k multiplier of the coarse spectrum; Nyquist zeroed (odd derivative)
void apply_ik(const PeriodicGrid& g, std::vector<cplx>& hat) {
    for (int j = 0; j < g.n; ++j) hat[j] *= cplx(0.0, g.wavenumber(j));
    hat[g.n / 2] = cplx(0.0, 0.0);
}

} // namespace

double guideline_dt(const PeriodicGrid& g) {
    const double kmax = kPi * g.n / g.length;
    return 2.8 / (kmax * kmax * kmax);
}

namespace detail {

std::vector<std::vector<cplx>> spectra_of(const MkdvState& s) {
    std::vector<std::vector<cplx>> uhat(s.m());
    for (int j = 0; j < s.m(); ++j) uhat[j] = spectrum(s.fields[j]);
    return uhat;
}

MkdvState state_from_spectra(const PeriodicGrid& g, const std::vector<std::vector<cplx>>& uhat,
                             double time) {
    MkdvState s;
    s.time = time;
    s.fields.reserve(uhat.size());
    for (const auto& h : uhat) s.fields.push_back(field_from_spectrum(g, h));
    return s;
}

std::vector<std::vector<double>> fine_fields(const PeriodicGrid& g,
                                             const std::vector<std::vector<cplx>>& uhat,
                                             bool dealias) {
    const int m = static_cast<int>(uhat.size());
    const int fine_n = dealias ? 2 * g.n : g.n;
    std::vector<std::vector<double>> fine(m, std::vector<double>(fine_n));
    const bool par = kernels::parallel_enabled();
#pragma omp parallel for schedule(static) if (par)
    for (int j = 0; j < m; ++j) {
        auto hat = resize_spectrum(uhat[j], fine_n);
        std::vector<cplx> buf(fine_n);
        fft::inverse(hat, buf);
        for (int i = 0; i < fine_n; ++i) fine[j][i] = buf[i].real();
    }
    for (int j = 0; j < m; ++j) {
        const double mx = kernels::max_abs(std::span<const double>(fine[j]));
        if (!(mx <= kBlowUpThreshold)) throw BlowUp("field exceeded blow-up threshold");
    }
    return fine;
}

void QuadraticFluxRhs::operator()(const std::vector<std::vector<cplx>>& uhat,
                                  std::vector<std::vector<cplx>>& out) const {
    const auto fine = fine_fields(grid, uhat, dealias);
    const int fine_n = static_cast<int>(fine[0].size());
    const auto fp = ptrs(fine);

    std::vector<double> q(fine_n);
    kernels::quadratic_form(q, n_coeff, fp, m);

    const bool par = kernels::parallel_enabled();
#pragma omp parallel for schedule(static) if (par)
    for (int j = 0; j < m; ++j) {
        std::vector<cplx> b(fine_n);
        for (int i = 0; i < fine_n; ++i) b[i] = 3.0 * (q[i] - fine[j][i] * fine[j][i]);
        fft::forward_inplace(b);
        auto hat = resize_spectrum(b, grid.n);
        apply_ik(grid, hat);
        out[j] = std::move(hat);
    }
}

} // namespace detail

double momentum(const MkdvState& s, const CouplingSet& c) {
    check_state(s, c);
    const auto uhat = detail::spectra_of(s);
    const auto fine = detail::fine_fields(s.grid(), uhat, true);
    const auto coeff = row_major(c.l_matrix, 0.5);
    std::vector<double> q(fine[0].size());
    kernels::quadratic_form(q, coeff, ptrs(fine), s.m());
    const PeriodicGrid fine_grid{s.grid().length, 2 * s.grid().n};
    return integrate(RealField{fine_grid, std::move(q)});
}

double hamiltonian(const MkdvState& s, const CouplingSet& c) {
    check_state(s, c);
    const int m = s.m();
    const PeriodicGrid fine_grid{s.grid().length, 2 * s.grid().n};

    std::vector<std::vector<cplx>> dhat(m);
    for (int j = 0; j < m; ++j) {
        auto hat = spectrum(s.fields[j]);
        apply_ik(s.grid(), hat);
        dhat[j] = std::move(hat);
    }
    const auto dfine = detail::fine_fields(s.grid(), dhat, true);
    const auto lcoeff = row_major(c.l_matrix, 0.5);
    std::vector<double> grad_term(dfine[0].size());
    kernels::quadratic_form(grad_term, lcoeff, ptrs(dfine), m);

    const auto ufine = detail::fine_fields(s.grid(), detail::spectra_of(s), true);
    std::vector<double> cubic_term(ufine[0].size());
    kernels::cubic_form(cubic_term, c.r_tensor.data(), ptrs(ufine), m);

    for (std::size_t i = 0; i < grad_term.size(); ++i) grad_term[i] += cubic_term[i];
    return integrate(RealField{fine_grid, std::move(grad_term)});
}

std::vector<RealField> variational_derivative_h(const MkdvState& s, const CouplingSet& c) {
    check_state(s, c);
    const int m = s.m();
    const PeriodicGrid g = s.grid();
    const auto ufine = detail::fine_fields(g, detail::spectra_of(s), true);
    const auto fp = ptrs(ufine);

    std::vector<RealField> out;
    out.reserve(m);
    for (int p = 0; p < m; ++p) {
        // quadratic part 3 sum_ij R_ijp u_i u_j, alias-free
        std::vector<double> coeff(m * m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) coeff[i * m + j] = 3.0 * c.r_tensor(i, j, p);
        std::vector<double> q(ufine[0].size());
        kernels::quadratic_form(q, coeff, fp, m);
        std::vector<cplx> qc(q.begin(), q.end());
        fft::forward_inplace(qc);
        RealField res = field_from_spectrum(g, resize_spectrum(qc, g.n));

        // linear part -sum_k L_kp u_k''
        for (int k = 0; k < m; ++k) {
            const RealField d2 = derivative(s.fields[k], 2);
            const double lkp = c.l_matrix(k, p);
            for (int i = 0; i < g.n; ++i) res.v[i] -= lkp * d2.v[i];
        }
        out.push_back(std::move(res));
    }
    return out;
}

std::vector<RealField> rhs_standard(const MkdvState& s, const CouplingSet& c) {
    check_state(s, c);
    const PeriodicGrid g = s.grid();
    detail::QuadraticFluxRhs rhs{g, row_major(c.n_tensor), s.m(), true};
    auto uhat = detail::spectra_of(s);
    std::vector<std::vector<cplx>> nl(s.m(), std::vector<cplx>(g.n));
    rhs(uhat, nl);
    std::vector<RealField> out;
    out.reserve(s.m());
    for (int j = 0; j < s.m(); ++j) {
        // total rhs = nonlinear + i k^3 u_hat (the -u''' term)
        for (int k = 0; k < g.n; ++k) {
            const double kw = g.wavenumber(k);
            nl[j][k] += cplx(0.0, kw * kw * kw) * uhat[j][k];
        }
        out.push_back(field_from_spectrum(g, nl[j]));
    }
    return out;
}

std::vector<RealField> rhs_hamiltonian_form(const MkdvState& s, const CouplingSet& c) {
    check_state(s, c);
    const int m = s.m();
    const PeriodicGrid g = s.grid();
    const Eigen::MatrixXd linv = invert_l(c);
    const auto uhat = detail::spectra_of(s);
    const auto ufine = detail::fine_fields(g, uhat, true);
    const auto fp = ptrs(ufine);

    // dR/du_p on the fine grid, truncated back
    std::vector<std::vector<cplx>> chat(m);
    for (int p = 0; p < m; ++p) {
        std::vector<double> coeff(m * m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) coeff[i * m + j] = 3.0 * c.r_tensor(i, j, p);
        std::vector<double> q(ufine[0].size());
        kernels::quadratic_form(q, coeff, fp, m);
        std::vector<cplx> qc(q.begin(), q.end());
        fft::forward_inplace(qc);
        chat[p] = resize_spectrum(qc, g.n);
        apply_ik(g, chat[p]);
    }

    std::vector<RealField> out;
    out.reserve(m);
    for (int j = 0; j < m; ++j) {
        std::vector<cplx> acc(g.n, cplx(0.0, 0.0));
        for (int p = 0; p < m; ++p) {
            const double w = linv(j, p);
            for (int k = 0; k < g.n; ++k) acc[k] += w * chat[p][k];
        }
        for (int k = 0; k < g.n; ++k) {
            const double kw = g.wavenumber(k);
            acc[k] += cplx(0.0, kw * kw * kw) * uhat[j][k];
        }
        out.push_back(field_from_spectrum(g, acc));
    }
    return out;
}

void evolve(const MkdvState& s0, const CouplingSet& c, double t_final, const IntegratorConfig& cfg,
            const std::function<void(const MkdvState&)>& on_snapshot) {
    check_state(s0, c);
    if (!(cfg.dt > 0.0)) throw Error("dt must be positive");
    const PeriodicGrid g = s0.grid();

    // land on t_final exactly with the nearest step count
    const long long nsteps = t_final == 0.0 ? 0 : std::max<long long>(1, std::llround(std::abs(t_final) / cfg.dt));
    const double dt = t_final == 0.0 ? cfg.dt : t_final / nsteps;

    // linear symbol of -u''': -(ik)^3 = +i k^3
    std::vector<cplx> lin(g.n);
    for (int k = 0; k < g.n; ++k) {
        const double kw = g.wavenumber(k);
        lin[k] = cplx(0.0, kw * kw * kw);
    }

    detail::QuadraticFluxRhs rhs{g, row_major(c.n_tensor), s0.m(), cfg.dealias};
    IfRk4 stepper(std::move(lin), s0.m());

    auto uhat = detail::spectra_of(s0);
    on_snapshot(s0);
    for (long long step = 1; step <= nsteps; ++step) {
        stepper.step(uhat, dt, std::cref(rhs));
        const bool last = step == nsteps;
        if (last || (cfg.snapshot_stride > 0 && step % cfg.snapshot_stride == 0))
            on_snapshot(detail::state_from_spectra(g, uhat, s0.time + step * dt));
    }
}

std::vector<MkdvState> evolve(const MkdvState& s0, const CouplingSet& c, double t_final,
                              const IntegratorConfig& cfg) {
    std::vector<MkdvState> traj;
    evolve(s0, c, t_final, cfg, [&](const MkdvState& s) { traj.push_back(s); });
    return traj;
}

} // namespace ckdv
