#pragma once

#include <span>
#include <vector>

#include "ckdv/eigenstructure.hpp"
#include "ckdv/kdv.hpp"
#include "ckdv/mnls.hpp"

namespace ckdv {

// Slow-coordinate perturbation fields (delta_rho, delta_v), one per
// condensate, sampled on the slow grid in X = epsilon * x.
struct ZerothOrderPerturbation {
    std::vector<RealField> delta_rho;
    std::vector<RealField> delta_v;
};

// The zeroth-order solution carried by the degenerate branch: component
// j <= m gets -lambda*^-1 rho0 w_j f_j (density) and -f_j (velocity); the
// reference condensate row m_hat carries the weighted sums; all other rows
// vanish.
ZerothOrderPerturbation zeroth_order_state(const std::vector<RealField>& f,
                                           const DegenerateSetup& d);

// psi_k = sqrt(rho0_k + eps^2 delta_rho_k(eps x)) exp(i phi_k), phi_k the
// spectral antiderivative of eps^2 delta_v_k(eps x). The fast grid must
// cover length slow_length / epsilon. Throws NegativeDensity /
// NonzeroMeanVelocity.
MnlsState embed_perturbation(const DegenerateSetup& d, const std::vector<RealField>& delta_rho,
                             const std::vector<RealField>& delta_v, double epsilon,
                             const PeriodicGrid& fast_grid);

// Inverse of the embedding followed by the degenerate-branch projection:
// Madelung fields -> (delta_rho, delta_v) -> restriction to the slow grid ->
// co-moving shift by +lambda* T (T = eps t) -> rows of V^-T for the +lambda*
// branch in the closed-form basis.
std::vector<RealField> extract_f(const MnlsState& state, const DegenerateSetup& d, double epsilon,
                                 double t, const PeriodicGrid& slow_grid);

// Direct integration of the physical-form coupled KdV system
//   d f_j/d tau + (3s/4) d/dxi [ (sum w_k f_k)^2 + sum w_k f_k^2 ]
//     - (3/(4 w_j^2)) d/dxi (w_j f_j)^2 - (1/(8 lambda* w_j)) d^3/dxi^3 (w_j f_j) = 0
// by integrating-factor RK4. Returns the fields at tau_final.
std::vector<RealField> evolve_coupled_kdv_physical(const std::vector<RealField>& f0,
                                                   const DegenerateSetup& d, double tau_final,
                                                   const IntegratorConfig& cfg);

// Variable change xi = L0 xi~, tau = -8 lambda* L0^3 tau~, f = u/(2 lambda*
// L0^2) between the physical and standard forms.
struct ScaleMap {
    double lambda_star = 1.0;
    double l0 = 1.0;

    double amplitude() const { return 2.0 * lambda_star * l0 * l0; }
    double standard_time(double tau) const { return -tau / (8.0 * lambda_star * l0 * l0 * l0); }
    double physical_time(double tau_tilde) const {
        return -8.0 * lambda_star * l0 * l0 * l0 * tau_tilde;
    }
};

std::pair<std::vector<RealField>, ScaleMap> rescale_to_standard(const std::vector<RealField>& f,
                                                                double lambda_star, double l0);
std::vector<RealField> unrescale_from_standard(const std::vector<RealField>& u,
                                               const ScaleMap& map);

struct ReductionExperiment {
    DegenerateSetup setup;
    PeriodicGrid slow_grid;
    std::vector<RealField> f0; // m localized profiles on slow_grid
    double tau_final = 0.5;
    double l0 = 1.0;

    // fast-grid resolution rule: n_fast = next power of two with at least
    // points_per_slow_unit * slow length points (override wins when nonzero)
    int points_per_slow_unit = 16;
    int fast_n_override = 0;

    // MNLS step dt = mnls_dt_coeff * epsilon^mnls_dt_power, capped below the
    // split-step resonance threshold for the fast grid
    double mnls_dt_coeff = 0.2;
    double mnls_dt_power = 1.5;
    double kdv_dt = 1e-3; // step of the slow-grid reference integration
};

struct ConvergencePoint {
    double epsilon = 0.0;
    double error = 0.0;
    double observed_order = 0.0; // NaN on the first point
};

struct ConvergenceResult {
    std::vector<ConvergencePoint> points;
    std::vector<std::vector<RealField>> f_extracted; // per epsilon
    std::vector<RealField> f_kdv;                    // the epsilon-free reference
    bool monotone_decreasing = false;
};

// Runs the MNLS system from embedded initial data to t = tau_final/eps^3 for
// each epsilon, projects back, and compares against the reference coupled
// KdV evolution of the same f0.
ConvergenceResult convergence_study(const ReductionExperiment& ex,
                                    std::span<const double> epsilons);

int fast_grid_size(const ReductionExperiment& ex);

} // namespace ckdv
