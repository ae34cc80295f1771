#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ckdv/errors.hpp"
#include "ckdv/tensor3.hpp"

namespace ckdv {

// The m nonzero real numbers that parameterize one coupled-KdV family.
struct Weights {
    std::vector<double> w;

    int m() const { return static_cast<int>(w.size()); }
    double sum() const;
};

// The two symmetric functions, already evaluated at the weights. Symmetry in
// the weights is the caller's contract; only the values enter here.
struct SymmetricPair {
    double s1 = 0.0;
    double s2 = 0.0;
};

// Coupling tensors of one m-component KdV system:
//   N_pq  = s1 w_p w_q + s2 w_q delta_pq
//   L_ij  = s2 w_i w_j + (1 - s2 sum(w)) w_j delta_ij
//   R_pqj = s1 w_p w_q w_j - (1 - s2 sum(w)) w_j delta_pq delta_qj
struct CouplingSet {
    Weights weights;
    Eigen::MatrixXd n_tensor;
    Eigen::MatrixXd l_matrix;
    Tensor3 r_tensor;
    SymmetricPair s_pair;

    int m() const { return weights.m(); }
};

// Detection thresholds (relative): rank loss and zero weights.
inline constexpr double kDegenerateScaleTol = 1e-12;
inline constexpr double kZeroWeightTol = 1e-14;
inline constexpr double kSingularTol = 1e-12;

// Throws ZeroWeight / DegenerateScale on inadmissible parameters.
CouplingSet build_universal(const Weights& w, const SymmetricPair& s);

// The single symmetric value s = (1 + sum w)^-1 for which the system matches
// the one produced by the multi-component NLS reduction. Always admissible.
double mnls_symmetric_value(const Weights& w);

struct ResidualReport {
    double eq_inverse = 0.0;    // delta_pj delta_qj + sum_k L^-1_kj R_pqk - N_pq
    double eq_product = 0.0;    // R_pqj - N_pq sum_i L_ij + L_pj delta_pq
    double symmetry = 0.0;      // worst violation across all symmetry invariants
    double column_sum = 0.0;    // sum_i L_ij - w_j
    bool singular_l = false;    // eq_inverse undefined when set

    double max_residual() const;
    bool pass(double tol = 1e-12) const;
};

ResidualReport verify_consistency(const CouplingSet& c);

// L^-1 with a rank check: throws SingularL when the smallest singular value
// falls below kSingularTol times the largest.
Eigen::MatrixXd invert_l(const CouplingSet& c);
Eigen::MatrixXd invert_symmetric_checked(const Eigen::MatrixXd& a, const char* what);

} // namespace ckdv
