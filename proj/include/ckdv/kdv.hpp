#pragma once

#include <functional>
#include <vector>

#include "ckdv/coupling.hpp"
#include "ckdv/grid.hpp"

namespace ckdv {

// State of the m-component KdV system: one real field per component on a
// shared grid.
struct MkdvState {
    std::vector<RealField> fields;
    double time = 0.0;

    int m() const { return static_cast<int>(fields.size()); }
    const PeriodicGrid& grid() const { return fields.at(0).grid; }
};

struct IntegratorConfig {
    double dt = 1e-3;
    bool dealias = true;
    int snapshot_stride = 0; // in steps; 0 emits only initial and final states
};

inline constexpr double kBlowUpThreshold = 1e8;

// dt at the stability guideline dt * k_max^3 = 2.8 for a given grid. The
// exponential integrator does not need it, but it is a sane default step.
double guideline_dt(const PeriodicGrid& g);

// P = int 1/2 sum_kj L_kj u_k u_j dx, evaluated alias-free on a doubled grid.
double momentum(const MkdvState& s, const CouplingSet& c);

// H = int [ 1/2 sum_kj L_kj u_k' u_j' + sum_ijk R_ijk u_i u_j u_k ] dx.
double hamiltonian(const MkdvState& s, const CouplingSet& c);

// Component p: -sum_k L_kp u_k'' + 3 sum_ij R_ijp u_i u_j.
std::vector<RealField> variational_derivative_h(const MkdvState& s, const CouplingSet& c);

// d/dt u_j = -6 u_j u_j' - u_j''' + 3 d/dx sum_ln N_ln u_l u_n
std::vector<RealField> rhs_standard(const MkdvState& s, const CouplingSet& c);

// d/dt u = -u''' + L^-1 d/dx (dR/du); algebraically identical to the
// standard form, computed through the Hamiltonian route.
std::vector<RealField> rhs_hamiltonian_form(const MkdvState& s, const CouplingSet& c);

// Integrating-factor RK4 evolution to t_final (sign of t_final sets the
// direction). Snapshots fire per cfg.snapshot_stride plus the initial and
// final states. Throws BlowUp past kBlowUpThreshold.
void evolve(const MkdvState& s0, const CouplingSet& c, double t_final, const IntegratorConfig& cfg,
            const std::function<void(const MkdvState&)>& on_snapshot);
std::vector<MkdvState> evolve(const MkdvState& s0, const CouplingSet& c, double t_final,
                              const IntegratorConfig& cfg);

namespace detail {

// Spectral nonlinear right-hand sides shared with the reduction module's
// physical-form integrator. coeff is the m x m quadratic coupling (row-major).
struct QuadraticFluxRhs {
    PeriodicGrid grid;
    std::vector<double> n_coeff; // row-major m x m
    int m = 0;
    bool dealias = true;

    void operator()(const std::vector<std::vector<cplx>>& uhat,
                    std::vector<std::vector<cplx>>& out) const;
};

std::vector<std::vector<cplx>> spectra_of(const MkdvState& s);
MkdvState state_from_spectra(const PeriodicGrid& g, const std::vector<std::vector<cplx>>& uhat,
                             double time);

// fine-grid (2n or n) real samples of every component; throws BlowUp on
// non-finite or oversized values
std::vector<std::vector<double>> fine_fields(const PeriodicGrid& g,
                                             const std::vector<std::vector<cplx>>& uhat,
                                             bool dealias);

} // namespace detail

} // namespace ckdv
