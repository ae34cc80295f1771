#include "ckdv/eigenstructure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ckdv {

namespace {

Eigen::VectorXd rho_vector(const CondensateEnsemble& e) {
    Eigen::VectorXd r(e.count());
    for (int i = 0; i < e.count(); ++i) r(i) = e.rho0[i];
    return r;
}

// assemble V, V^-T, L and the condition report from (lambda_sq, Q)
SpectralStructure assemble(const CondensateEnsemble& e, Eigen::VectorXd lambda_sq,
                           Eigen::MatrixXd q) {
    const int n = e.count();
    SpectralStructure s;
    s.lambda_sq = std::move(lambda_sq);
    s.q_matrix = std::move(q);

    const Eigen::VectorXd rho = rho_vector(e);
    Eigen::VectorXd lambda(n);
    for (int i = 0; i < n; ++i) lambda(i) = std::sqrt(s.lambda_sq(i));

    s.l_gram = s.q_matrix.transpose() * rho.asDiagonal() * s.q_matrix;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s.l_gram, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(n - 1) < kSingularTol * sv(0)) throw SingularL("Q^T rho Q is numerically singular");
    s.l_gram_condition = sv(0) / sv(n - 1);
    const Eigen::MatrixXd linv = svd.solve(Eigen::MatrixXd::Identity(n, n));

    const Eigen::MatrixXd rql = rho.asDiagonal() * s.q_matrix * lambda.cwiseInverse().asDiagonal();
    s.v_matrix.resize(2 * n, 2 * n);
    s.v_matrix << rql, -rql, s.q_matrix, s.q_matrix;

    const Eigen::MatrixXd qli = s.q_matrix * linv;
    const Eigen::MatrixXd qll = qli * lambda.asDiagonal();
    const Eigen::MatrixXd rqli = rho.asDiagonal() * qli;
    s.v_inv_t.resize(2 * n, 2 * n);
    s.v_inv_t << qll, -qll, rqli, rqli;
    s.v_inv_t *= 0.5;
    return s;
}

} // namespace

Eigen::MatrixXd build_a(const CondensateEnsemble& e) {
    const int n = e.count();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    a.topRightCorner(n, n) = rho_vector(e).asDiagonal();
    a.bottomLeftCorner(n, n) = alpha_matrix(e);
    return a;
}

SpectralStructure decompose(const CondensateEnsemble& e) {
    const int n = e.count();
    const Eigen::VectorXd rho = rho_vector(e);
    const Eigen::VectorXd rho_sqrt = rho.cwiseSqrt();

    // alpha*rho is similar to the symmetric rho^1/2 alpha rho^1/2
    const Eigen::MatrixXd sym =
        rho_sqrt.asDiagonal() * alpha_matrix(e) * rho_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");

    Eigen::VectorXd vals = es.eigenvalues();
    if (vals(0) <= 0.0)
        throw ComplexEigenvalue("alpha*rho has a non-positive eigenvalue; sound speeds not real");

    Eigen::MatrixXd q = rho_sqrt.cwiseInverse().asDiagonal() * es.eigenvectors();
    // descending order, unit-length columns
    Eigen::VectorXd lambda_sq(n);
    Eigen::MatrixXd qs(n, n);
    for (int i = 0; i < n; ++i) {
        lambda_sq(i) = vals(n - 1 - i);
        qs.col(i) = q.col(n - 1 - i).normalized();
    }
    return assemble(e, std::move(lambda_sq), std::move(qs));
}

DegenerateSetup degenerate_ensemble(double lambda_star, double h, const Weights& w,
                                    double rho_ref,
                                    const std::vector<std::pair<double, double>>& extras) {
    if (!(lambda_star > 0.0)) throw Error("lambda_star must be positive");
    if (!(h > 0.0)) throw Error("h must be positive");
    if (!(rho_ref > 0.0)) throw Error("rho_ref must be positive");
    const int m = w.m();
    if (m < 1) throw Error("at least one weight required");
    for (double wi : w.w)
        if (!(wi > 0.0)) throw Error("weights are density ratios and must be positive");

    const double ls2 = lambda_star * lambda_star;
    std::vector<double> rho0, g;
    for (int j = 0; j < m; ++j) {
        rho0.push_back(rho_ref * w.w[j]);
        g.push_back(h + ls2 / (rho_ref * w.w[j]));
    }
    rho0.push_back(rho_ref);
    g.push_back(h + ls2 / rho_ref);

    for (const auto& [er, eg] : extras) {
        if (!(er > 0.0) || !(eg > h))
            throw Error("extras need positive density and g > h");
        if (std::abs(er * (eg - h) - ls2) <= 1e-10 * ls2)
            throw DegeneracyCollision(
                "extra condensate satisfies the degeneracy condition; multiplicity would grow");
        rho0.push_back(er);
        g.push_back(eg);
    }

    DegenerateSetup d;
    d.lambda_star = lambda_star;
    d.multiplicity = m;
    d.weights = w;
    d.rho_ref = rho_ref;
    d.ensemble = make_ensemble(std::move(rho0), std::move(g), h);
    return d;
}

Eigen::MatrixXd degenerate_eigenvectors(const DegenerateSetup& d) {
    const int n = d.ensemble.count();
    const int m = d.multiplicity;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, m);
    for (int k = 0; k < m; ++k) {
        q(k, k) = -1.0;
        q(d.m_hat() - 1, k) = d.weights.w[k];
    }
    return q;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> ltilde_and_inverse(const DegenerateSetup& d) {
    const int m = d.multiplicity;
    const double rho0 = d.rho_ref;
    const double s = mnls_symmetric_value(d.weights);
    Eigen::MatrixXd lt(m, m), lti(m, m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            const double dd = (j == k) ? 1.0 : 0.0;
            lt(j, k) = rho0 * d.weights.w[j] * d.weights.w[k] + rho0 * d.weights.w[j] * dd;
            lti(j, k) = -s / rho0 + dd / (rho0 * d.weights.w[j]);
        }
    return {lt, lti};
}

Eigen::MatrixXd ql_inverse_columns(const DegenerateSetup& d) {
    const int n = d.ensemble.count();
    const int m = d.multiplicity;
    const double rho0 = d.rho_ref;
    const double s = mnls_symmetric_value(d.weights);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, m);
    for (int j = 0; j < d.m_hat(); ++j) {
        const double wj = (j < m) ? d.weights.w[j] : 1.0;
        for (int k = 0; k < m; ++k) {
            const double dd = (j == k) ? 1.0 : 0.0;
            out(j, k) = s / rho0 - dd / (rho0 * wj);
        }
    }
    return out;
}

int count_multiplicity(const Eigen::VectorXd& lambda_sq, double lambda_star_sq, double rel_tol) {
    int count = 0;
    for (int i = 0; i < lambda_sq.size(); ++i)
        if (std::abs(lambda_sq(i) - lambda_star_sq) <= rel_tol * std::abs(lambda_star_sq)) ++count;
    return count;
}

SpectralStructure decompose_with_closed_basis(const DegenerateSetup& d) {
    const SpectralStructure numeric = decompose(d.ensemble);
    const int n = d.ensemble.count();
    const int m = d.multiplicity;
    const double ls2 = d.lambda_star * d.lambda_star;

    const int found = count_multiplicity(numeric.lambda_sq, ls2);
    if (found != m)
        throw Error("degenerate eigenvalue multiplicity mismatch: expected " +
                    std::to_string(m) + ", found " + std::to_string(found));

    // closed-form basis first, then the remaining numeric eigenvectors
    Eigen::VectorXd lambda_sq(n);
    Eigen::MatrixXd q(n, n);
    q.leftCols(m) = degenerate_eigenvectors(d);
    for (int k = 0; k < m; ++k) lambda_sq(k) = ls2;
    int col = m;
    for (int i = 0; i < n; ++i) {
        if (std::abs(numeric.lambda_sq(i) - ls2) <= 1e-8 * ls2) continue;
        lambda_sq(col) = numeric.lambda_sq(i);
        q.col(col) = numeric.q_matrix.col(i);
        ++col;
    }
    return assemble(d.ensemble, std::move(lambda_sq), std::move(q));
}

} // namespace ckdv
