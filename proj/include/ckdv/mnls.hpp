#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "ckdv/grid.hpp"

namespace ckdv {

// Uniform background of N condensates: densities rho0_j, self-couplings g_j,
// and one cross-coupling h shared by every pair.
struct CondensateEnsemble {
    std::vector<double> rho0;
    std::vector<double> g;
    double h = 0.0;

    int count() const { return static_cast<int>(rho0.size()); }
};

// Validates positivity and the dynamical stability condition h < min g_j.
CondensateEnsemble make_ensemble(std::vector<double> rho0, std::vector<double> g, double h);

// State of the N-component nonlinear Schroedinger system.
struct MnlsState {
    std::vector<ComplexField> psi;
    double time = 0.0;

    int count() const { return static_cast<int>(psi.size()); }
    const PeriodicGrid& grid() const { return psi.at(0).grid; }
};

// alpha_jk = h + (g_j - h) delta_jk
Eigen::MatrixXd alpha_matrix(const CondensateEnsemble& e);

// Exact uniform solution psi_k = sqrt(rho0_k) exp(i(theta_k - t sum_j
// alpha_kj rho0_j)).
MnlsState plane_wave(const CondensateEnsemble& e, const std::vector<double>& theta_bar, double t,
                     const PeriodicGrid& g);

// Strang-split evolution: exact nonlinear phase rotation around an exact
// spectral linear step; second order in dt, conserves each mass to rounding.
void evolve_mnls(const MnlsState& s0, const CondensateEnsemble& e, double t_final, double dt,
                 int snapshot_stride, const std::function<void(const MnlsState&)>& on_snapshot);
std::vector<MnlsState> evolve_mnls(const MnlsState& s0, const CondensateEnsemble& e,
                                   double t_final, double dt);

struct HydroFields {
    std::vector<RealField> rho;
    std::vector<RealField> v;
};

inline constexpr double kVacuumThreshold = 1e-8;

// rho_k = |psi_k|^2, v_k = Im(psi_k^* psi_k') / |psi_k|^2. Throws VacuumPoint
// when any |psi_k| dips below kVacuumThreshold.
HydroFields madelung(const MnlsState& s);

// Inverse Madelung map: psi_k = sqrt(rho_k) exp(i phi_k), phi_k the periodic
// antiderivative of v_k anchored to ref_phase_k at x = 0. v_k must have zero
// mean (NonzeroMeanVelocity otherwise); rho_k must stay positive.
MnlsState synthesize(const HydroFields& hf, const std::vector<double>& ref_phase, double time = 0.0);

// per-component int |psi_k|^2 dx
std::vector<double> mass(const MnlsState& s);

} // namespace ckdv
