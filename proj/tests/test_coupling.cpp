#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ckdv/coupling.hpp"

using namespace ckdv;

TEST_CASE("equal weights collapse the tensors") {
    const CouplingSet c = build_universal(Weights{{1.0, 1.0}}, SymmetricPair{1.0 / 3, 1.0 / 3});
    Eigen::MatrixXd expect(2, 2);
    expect << 2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3;
    CHECK((c.n_tensor - expect).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((c.l_matrix - expect).cwiseAbs().maxCoeff() < 1e-15);
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
            for (int j = 0; j < 2; ++j) {
                const double want = 1.0 / 3 - (p == q && q == j ? 1.0 / 3 : 0.0);
                CHECK(c.r_tensor(p, q, j) == doctest::Approx(want).epsilon(1e-14));
            }
}

TEST_CASE("hand-evaluated w = (1,2), s = 1/4") {
    const CouplingSet c = build_universal(Weights{{1.0, 2.0}}, SymmetricPair{0.25, 0.25});
    Eigen::MatrixXd expect(2, 2);
    expect << 0.5, 0.5, 0.5, 1.5;
    CHECK((c.n_tensor - expect).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((c.l_matrix - expect).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(c.r_tensor(0, 0, 0) == doctest::Approx(0.0));
    CHECK(c.r_tensor(0, 0, 1) == doctest::Approx(0.5));
    CHECK(c.r_tensor(0, 1, 1) == doctest::Approx(1.0));
    CHECK(c.r_tensor(1, 1, 1) == doctest::Approx(1.5));
}

TEST_CASE("rank-one scale is rejected") {
    CHECK_THROWS_AS(build_universal(Weights{{1.0, 1.0}}, SymmetricPair{0.3, 0.5}),
                    DegenerateScale);
    CHECK_THROWS_AS(build_universal(Weights{{1.0, 0.0}}, SymmetricPair{0.3, 0.3}), ZeroWeight);
}

TEST_CASE("mnls symmetric value") {
    CHECK(mnls_symmetric_value(Weights{{1.0, 1.0}}) == doctest::Approx(1.0 / 3));
    CHECK(mnls_symmetric_value(Weights{{1.0, 2.0}}) == doctest::Approx(0.25));
    CHECK(mnls_symmetric_value(Weights{{1.0}}) == doctest::Approx(0.5));
    // always admissible: s != (sum w)^-1
    for (auto w : {Weights{{1.0}}, Weights{{0.5, 2.0}}, Weights{{3.0, 0.25, 1.0}}}) {
        const double s = mnls_symmetric_value(w);
        CHECK(std::abs(1.0 - s * w.sum()) > 1e-6);
        CHECK_NOTHROW(build_universal(w, SymmetricPair{s, s}));
    }
    CHECK_THROWS_AS(mnls_symmetric_value(Weights{{-2.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("consistency of built sets, including the scalar case") {
    for (auto [w, s] : {std::pair{Weights{{1.0, 2.0}}, 0.25}, std::pair{Weights{{1.0}}, 0.5}}) {
        const ResidualReport r = verify_consistency(build_universal(w, SymmetricPair{s, s}));
        CHECK(!r.singular_l);
        CHECK(r.max_residual() < 1e-12);
    }
    // hand check of the product relation: R_222 = N_22 w_2 - L_22 = 3 - 3/2
    const CouplingSet c = build_universal(Weights{{1.0, 2.0}}, SymmetricPair{0.25, 0.25});
    CHECK(c.r_tensor(1, 1, 1) ==
          doctest::Approx(c.n_tensor(1, 1) * 2.0 - c.l_matrix(1, 1)).epsilon(1e-14));
}

TEST_CASE("perturbing R breaks the product relation by the same amount") {
    CouplingSet c = build_universal(Weights{{1.0, 1.0}}, SymmetricPair{1.0 / 3, 1.0 / 3});
    c.r_tensor(0, 0, 0) += 1.0;
    const ResidualReport r = verify_consistency(c);
    CHECK(r.eq_product == doctest::Approx(1.0));
}

TEST_CASE("invert_l on hand-checked matrices") {
    const CouplingSet c = build_universal(Weights{{1.0, 1.0}}, SymmetricPair{1.0 / 3, 1.0 / 3});
    const Eigen::MatrixXd inv = invert_l(c); // [[2/3,1/3],[1/3,2/3]]^-1 = [[2,-1],[-1,2]]
    Eigen::MatrixXd expect(2, 2);
    expect << 2.0, -1.0, -1.0, 2.0;
    CHECK((inv - expect).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((c.l_matrix * inv - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

    CouplingSet ident = c;
    ident.l_matrix = Eigen::MatrixXd::Identity(2, 2);
    CHECK((invert_l(ident) - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

    // rank-1 L from w=(1,1), s2=1/2, constructed directly (validation bypassed)
    CouplingSet bad = c;
    bad.l_matrix << 0.5, 0.5, 0.5, 0.5;
    CHECK_THROWS_AS(invert_l(bad), SingularL);
}

TEST_CASE("singular L is flagged in the report") {
    CouplingSet bad = build_universal(Weights{{1.0, 1.0}}, SymmetricPair{1.0 / 3, 1.0 / 3});
    bad.l_matrix << 0.5, 0.5, 0.5, 0.5;
    const ResidualReport r = verify_consistency(bad);
    CHECK(r.singular_l);
    CHECK(!r.pass());
}

namespace {

// admissible random parameters: weights bounded away from zero, s2 bounded
// away from the rank-one value
struct RandomCase {
    Weights w;
    SymmetricPair s;
};

RandomCase random_case(std::mt19937& rng) {
    std::uniform_int_distribution<int> mdist(1, 6);
    std::uniform_real_distribution<double> wdist(0.25, 3.0);
    std::uniform_real_distribution<double> sdist(-1.5, 1.5);
    std::bernoulli_distribution sign(0.5);
    while (true) {
        RandomCase rc;
        const int m = mdist(rng);
        for (int i = 0; i < m; ++i) rc.w.w.push_back(wdist(rng) * (sign(rng) ? 1.0 : -1.0));
        rc.s.s1 = sdist(rng);
        rc.s.s2 = sdist(rng);
        const double wsum = rc.w.sum();
        if (std::abs(wsum) < 0.2) continue;
        if (std::abs(rc.s.s2 - 1.0 / wsum) < 0.1) continue;
        return rc;
    }
}

} // namespace

TEST_CASE("property: consistency residuals stay below 1e-12 over random draws") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const RandomCase rc = random_case(rng);
        const CouplingSet c = build_universal(rc.w, rc.s);
        const ResidualReport r = verify_consistency(c);
        INFO("trial ", trial, " m = ", rc.w.m());
        CHECK(!r.singular_l);
        CHECK(r.max_residual() < 1e-12);
    }
}

TEST_CASE("property: column sums reproduce the weights") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const RandomCase rc = random_case(rng);
        const CouplingSet c = build_universal(rc.w, rc.s);
        for (int j = 0; j < c.m(); ++j)
            CHECK(c.l_matrix.col(j).sum() ==
                  doctest::Approx(rc.w.w[j]).epsilon(1e-13).scale(std::abs(rc.w.w[j]) + 1.0));
    }
}

TEST_CASE("scale covariance: common factor on L and R leaves the inverse relation alone") {
    std::mt19937 rng(13);
    const RandomCase rc = random_case(rng);
    const CouplingSet c = build_universal(rc.w, rc.s);
    const double base = verify_consistency(c).eq_inverse;
    for (double factor : {0.125, 3.0, -7.5}) {
        CouplingSet scaled = c;
        scaled.l_matrix *= factor;
        for (auto& v : scaled.r_tensor.data()) v *= factor;
        const double r = verify_consistency(scaled).eq_inverse;
        CHECK(std::abs(r - base) < 1e-12);
    }
}

TEST_CASE("null space dimension equals the number of zero weights") {
    // L built directly from the closed form with some weights zeroed
    auto build_l = [](const std::vector<double>& w, double s2) {
        const int m = static_cast<int>(w.size());
        double wsum = 0.0;
        for (double wi : w) wsum += wi;
        Eigen::MatrixXd l(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                l(i, j) = s2 * w[i] * w[j] + (i == j ? (1.0 - s2 * wsum) * w[j] : 0.0);
        return l;
    };
    struct Case {
        std::vector<double> w;
        int zeros;
    };
    for (const auto& [w, zeros] :
         {Case{{1.0, 0.0, 2.0}, 1}, Case{{0.0, 0.0, 1.5}, 2}, Case{{1.0, -2.0, 0.5}, 0}}) {
        const Eigen::MatrixXd l = build_l(w, 0.3);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(l);
        const auto& sv = svd.singularValues();
        int null_dim = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) < 1e-12 * sv(0)) ++null_dim;
        CHECK(null_dim == zeros);
    }
}
