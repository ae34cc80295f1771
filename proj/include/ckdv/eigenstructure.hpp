#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "ckdv/coupling.hpp"
#include "ckdv/mnls.hpp"

namespace ckdv {

// Eigendecomposition of the linearized wave operator
//   A = [ 0  rho ]      rho = diag(rho0_k)
//       [ alpha 0 ],
// assembled per the block formulas
//   V      = [ rho Q Lambda^-1, -rho Q Lambda^-1 ;  Q, Q ]
//   V^-T   = 1/2 [ Q L^-1 Lambda, -Q L^-1 Lambda ;  rho Q L^-1, rho Q L^-1 ]
// with L = Q^T rho Q and Lambda^2 the eigenvalues of alpha*rho.
struct SpectralStructure {
    Eigen::VectorXd lambda_sq;  // N entries, paired eigenvalues +-sqrt(lambda_sq)
    Eigen::MatrixXd q_matrix;   // N x N columns: eigenvectors of alpha*rho
    Eigen::MatrixXd v_matrix;   // 2N x 2N
    Eigen::MatrixXd v_inv_t;    // 2N x 2N
    Eigen::MatrixXd l_gram;     // Q^T rho Q
    double l_gram_condition = 0.0;
};

// m+1 condensates sharing the sound speed lambda_star (plus optional
// bystanders); weights w_j = rho0_j / rho_ref for j = 1..m, w_{m+1} = 1.
struct DegenerateSetup {
    double lambda_star = 0.0;
    int multiplicity = 0; // m
    Weights weights;      // the m weights; the reference condensate's w = 1 is implied
    double rho_ref = 0.0;
    CondensateEnsemble ensemble;

    int m_hat() const { return multiplicity + 1; }
};

Eigen::MatrixXd build_a(const CondensateEnsemble& e);

// Numeric decomposition through the symmetrized form rho^1/2 alpha rho^1/2;
// eigenvalues sorted descending, eigenvectors unit length. Throws
// ComplexEigenvalue if any lambda^2 <= 0.
SpectralStructure decompose(const CondensateEnsemble& e);

// Builds the ensemble g_j = h + lambda_star^2/(rho_ref w_j), rho0_j = rho_ref
// w_j (reference condensate appended with w = 1), then the extras. Throws
// DegeneracyCollision if an extra lands on the degenerate family.
DegenerateSetup degenerate_ensemble(double lambda_star, double h, const Weights& w,
                                    double rho_ref,
                                    const std::vector<std::pair<double, double>>& extras = {});

// Closed-form eigenvectors of alpha*rho at lambda_star^2: column k has -1 at
// row k, w_k at row m_hat, zero elsewhere. N x m.
Eigen::MatrixXd degenerate_eigenvectors(const DegenerateSetup& d);

// Ltilde_jk = rho0 (w_j w_k + w_j delta_jk) and its closed-form inverse
// -rho0^-1 s + rho0^-1 delta_jk / w_j, s = (1 + sum w)^-1.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> ltilde_and_inverse(const DegenerateSetup& d);

// First m columns of Q L^-1 in closed form:
// rho0^-1 s - rho0^-1 delta_jk / w_j on rows j <= m_hat, zero below. N x m.
Eigen::MatrixXd ql_inverse_columns(const DegenerateSetup& d);

// Numeric decomposition with the degenerate eigenspace basis replaced by the
// closed-form vectors, ordered first; the reduction formulas are derived in
// that basis.
SpectralStructure decompose_with_closed_basis(const DegenerateSetup& d);

// multiplicity of lambda_star^2 in lambda_sq under relative clustering
int count_multiplicity(const Eigen::VectorXd& lambda_sq, double lambda_star_sq,
                       double rel_tol = 1e-8);

} // namespace ckdv
