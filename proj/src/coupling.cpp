#include "ckdv/coupling.hpp"

#include <cmath>

namespace ckdv {

double Weights::sum() const {
    double s = 0.0;
    for (double x : w) s += x;
    return s;
}

CouplingSet build_universal(const Weights& w, const SymmetricPair& s) {
    const int m = w.m();
    if (m < 1) throw Error("at least one weight required");
    for (double wi : w.w)
        if (std::abs(wi) < kZeroWeightTol) throw ZeroWeight("weight is zero within tolerance");

    const double wsum = w.sum();
    const double diag = 1.0 - s.s2 * wsum;
    if (std::abs(diag) < kDegenerateScaleTol)
        throw DegenerateScale("s2 equals (sum w)^-1 within tolerance: L would be rank one");

    CouplingSet c;
    c.weights = w;
    c.s_pair = s;
    c.n_tensor.resize(m, m);
    c.l_matrix.resize(m, m);
    c.r_tensor = Tensor3(m);

    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
            const double d = (p == q) ? 1.0 : 0.0;
            c.n_tensor(p, q) = s.s1 * w.w[p] * w.w[q] + s.s2 * w.w[q] * d;
            c.l_matrix(p, q) = s.s2 * w.w[p] * w.w[q] + diag * w.w[q] * d;
        }

    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
            for (int j = 0; j < m; ++j) {
                const double d = (p == q && q == j) ? 1.0 : 0.0;
                c.r_tensor(p, q, j) = s.s1 * w.w[p] * w.w[q] * w.w[j] - diag * w.w[j] * d;
            }

    return c;
}

double mnls_symmetric_value(const Weights& w) {
    const double denom = 1.0 + w.sum();
    if (std::abs(denom) < 1e-14) throw std::invalid_argument("1 + sum(w) must be nonzero");
    return 1.0 / denom;
}

double ResidualReport::max_residual() const {
    double r = std::max({eq_product, symmetry, column_sum});
    if (!singular_l) r = std::max(r, eq_inverse);
    return r;
}

bool ResidualReport::pass(double tol) const { return !singular_l && max_residual() < tol; }

Eigen::MatrixXd invert_symmetric_checked(const Eigen::MatrixXd& a, const char* what) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) < kSingularTol * sv(0))
        throw SingularL(std::string(what) + ": numerically singular");
    return svd.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
}

Eigen::MatrixXd invert_l(const CouplingSet& c) { return invert_symmetric_checked(c.l_matrix, "L"); }

ResidualReport verify_consistency(const CouplingSet& c) {
    const int m = c.m();
    ResidualReport rep;

    Eigen::MatrixXd linv;
    try {
        linv = invert_l(c);
    } catch (const SingularL&) {
        rep.singular_l = true;
    }

    if (!rep.singular_l) {
        for (int p = 0; p < m; ++p)
            for (int q = 0; q < m; ++q)
                for (int j = 0; j < m; ++j) {
                    double acc = (p == j && q == j) ? 1.0 : 0.0;
                    for (int k = 0; k < m; ++k) acc += linv(k, j) * c.r_tensor(p, q, k);
                    rep.eq_inverse = std::max(rep.eq_inverse, std::abs(acc - c.n_tensor(p, q)));
                }
    }

    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
            for (int j = 0; j < m; ++j) {
                const double colsum = c.l_matrix.col(j).sum();
                const double d = (p == q) ? 1.0 : 0.0;
                const double r =
                    c.r_tensor(p, q, j) - c.n_tensor(p, q) * colsum + c.l_matrix(p, j) * d;
                rep.eq_product = std::max(rep.eq_product, std::abs(r));
            }

    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
            rep.symmetry = std::max(rep.symmetry, std::abs(c.n_tensor(p, q) - c.n_tensor(q, p)));
            rep.symmetry = std::max(rep.symmetry, std::abs(c.l_matrix(p, q) - c.l_matrix(q, p)));
        }
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
            for (int j = 0; j < m; ++j) {
                const double r = c.r_tensor(p, q, j);
                for (double other : {c.r_tensor(p, j, q), c.r_tensor(q, p, j), c.r_tensor(q, j, p),
                                     c.r_tensor(j, p, q), c.r_tensor(j, q, p)})
                    rep.symmetry = std::max(rep.symmetry, std::abs(r - other));
            }

    for (int j = 0; j < m; ++j)
        rep.column_sum =
            std::max(rep.column_sum, std::abs(c.l_matrix.col(j).sum() - c.weights.w[j]));

    return rep;
}

} // namespace ckdv
