#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ckdv/grid.hpp"

using namespace ckdv;

namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const RealField& a, const RealField& b) {
    double mx = 0.0;
    for (int i = 0; i < a.grid.n; ++i) mx = std::max(mx, std::abs(a.v[i] - b.v[i]));
    return mx;
}

double max_abs(const RealField& a) {
    double mx = 0.0;
    for (double v : a.v) mx = std::max(mx, std::abs(v));
    return mx;
}

// Fornberg recursion for finite-difference weights of the m-th derivative at
// x0 = 0 on arbitrary nodes. Used as the independent derivative oracle.
std::vector<double> fd_weights(int order, const std::vector<double>& nodes) {
    const int nn = static_cast<int>(nodes.size());
    std::vector<std::vector<double>> c(nn, std::vector<double>(order + 1, 0.0));
    c[0][0] = 1.0;
    double c1 = 1.0;
    for (int i = 1; i < nn; ++i) {
        double c2 = 1.0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = std::min(i, order); k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - nodes[i - 1] * c[i - 1][k]) / c2;
                c[i][0] = -c1 * nodes[i - 1] * c[i - 1][0] / c2;
            }
            for (int k = std::min(i, order); k >= 1; --k)
                c[j][k] = (nodes[i] * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = nodes[i] * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(nn);
    for (int i = 0; i < nn; ++i) w[i] = c[i][order];
    return w;
}

} // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(make_grid(10.0, 100), Error); // not a power of two
    CHECK_THROWS_AS(make_grid(10.0, 4), Error);   // too small
    CHECK_THROWS_AS(make_grid(-1.0, 64), Error);
    const PeriodicGrid g = make_grid(2.0 * kPi, 64);
    CHECK(g.spacing() == doctest::Approx(2.0 * kPi / 64));
    CHECK(g.mode_index(0) == 0);
    CHECK(g.mode_index(32) == 32);
    CHECK(g.mode_index(63) == -1);
}

TEST_CASE("derivative of a single mode") {
    const PeriodicGrid g = make_grid(7.0, 128);
    const double k = 2.0 * kPi / g.length;
    const RealField f = make_field(g, [&](double x) { return std::sin(k * x); });
    const RealField d = derivative(f, 1);
    const RealField expect = make_field(g, [&](double x) { return k * std::cos(k * x); });
    CHECK(max_diff(d, expect) < 1e-12);
}

TEST_CASE("derivative of a constant is zero") {
    const PeriodicGrid g = make_grid(5.0, 64);
    const RealField f = make_field(g, [](double) { return 3.25; });
    for (int order : {1, 2, 3}) CHECK(max_abs(derivative(f, order)) < 1e-12);
}

TEST_CASE("third derivative of sech^2 matches the finite-difference oracle") {
    const PeriodicGrid g = make_grid(30.0, 256);
    auto profile = [&](double x) {
        const double s = 1.0 / std::cosh(x - 15.0);
        return s * s;
    };
    const RealField f = make_field(g, profile);
    const RealField d3 = derivative(f, 3);

    // 8th-order centered stencil on a 4x refined grid
    const int refine = 4;
    const double h = g.spacing() / refine;
    const int half = 5;
    std::vector<double> nodes(2 * half + 1);
    for (int i = 0; i <= 2 * half; ++i) nodes[i] = (i - half) * h;
    const auto w = fd_weights(3, nodes);

    double max_rel = 0.0;
    const double scale = max_abs(d3);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        double fd = 0.0;
        for (int s = -half; s <= half; ++s) fd += w[s + half] * profile(x + s * h);
        max_rel = std::max(max_rel, std::abs(fd - d3.v[i]) / scale);
    }
    CHECK(max_rel < 1e-6);
}

TEST_CASE("integrate basics") {
    const PeriodicGrid g = make_grid(2.0 * kPi, 128);
    CHECK(integrate(make_field(g, [](double) { return 1.0; })) == doctest::Approx(2.0 * kPi));
    CHECK(integrate(zero_field(g)) == 0.0);

    const PeriodicGrid g2 = make_grid(11.0, 128);
    const double k = 2.0 * kPi / g2.length;
    const RealField s2 = make_field(g2, [&](double x) { return std::sin(k * x) * std::sin(k * x); });
    CHECK(integrate(s2) == doctest::Approx(g2.length / 2.0).epsilon(1e-13));
}

TEST_CASE("dealiased product of two high modes has no aliasing energy") {
    const PeriodicGrid g = make_grid(2.0 * kPi, 64);
    const int k1 = 20, k2 = 21; // k1 + k2 = 41 > Nyquist 32
    const RealField a = make_field(g, [&](double x) { return std::sin(k1 * x); });
    const RealField b = make_field(g, [&](double x) { return std::sin(k2 * x); });
    const RealField p = dealias_product(a, b);

    // oracle: product on a 4n grid, truncated back
    const PeriodicGrid gf = make_grid(g.length, 4 * g.n);
    const RealField af = make_field(gf, [&](double x) { return std::sin(k1 * x); });
    const RealField bf = make_field(gf, [&](double x) { return std::sin(k2 * x); });
    RealField pf{gf, std::vector<double>(gf.n)};
    for (int i = 0; i < gf.n; ++i) pf.v[i] = af.v[i] * bf.v[i];
    const RealField truth = resample(pf, g.n);

    CHECK(max_diff(p, truth) < 1e-13);

    // the naive product aliases: max difference from truth is order one
    RealField naive{g, std::vector<double>(g.n)};
    for (int i = 0; i < g.n; ++i) naive.v[i] = a.v[i] * b.v[i];
    CHECK(max_diff(naive, truth) > 0.1);
}

TEST_CASE("dealiased product with the constant-one field is the identity") {
    const PeriodicGrid g = make_grid(9.0, 64);
    // include a Nyquist component on purpose
    const RealField f = make_field(g, [&](double x) {
        return std::exp(std::cos(2.0 * kPi * x / g.length)) +
               0.1 * std::cos(kPi * g.n * x / g.length);
    });
    const RealField one = make_field(g, [](double) { return 1.0; });
    CHECK(max_diff(dealias_product(f, one), f) < 1e-13);
}

TEST_CASE("triple product matches the fine-grid oracle") {
    const PeriodicGrid g = make_grid(20.0, 128);
    const RealField f = make_field(g, [&](double x) {
        const double d = x - 10.0;
        return std::exp(-d * d / 4.0);
    });
    const RealField p = dealias_product(f, f, f);

    const PeriodicGrid gf = make_grid(g.length, 4 * g.n);
    const RealField ff = resample(f, gf.n);
    RealField pf{gf, std::vector<double>(gf.n)};
    for (int i = 0; i < gf.n; ++i) pf.v[i] = ff.v[i] * ff.v[i] * ff.v[i];
    CHECK(max_diff(p, resample(pf, g.n)) < 1e-12);
}

TEST_CASE("derivative composition: d(d f) = d2 f") {
    const PeriodicGrid g = make_grid(15.0, 128);
    const RealField f = make_field(g, [&](double x) {
        return std::exp(std::sin(2.0 * kPi * x / g.length));
    });
    const RealField d11 = derivative(derivative(f, 1), 1);
    const RealField d2 = derivative(f, 2);
    const double scale = max_abs(d2);
    CHECK(max_diff(d11, d2) / scale < 1e-11);
}

TEST_CASE("integral of an exact derivative vanishes") {
    const PeriodicGrid g = make_grid(13.0, 256);
    const RealField f = make_field(g, [&](double x) {
        const double d = x - 6.5;
        return std::exp(-d * d / 2.0) * (1.0 + 0.3 * std::sin(4.0 * kPi * x / g.length));
    });
    const double norm = integrate(make_field(g, [&](double x) {
        const double d = x - 6.5;
        return std::abs(std::exp(-d * d / 2.0));
    }));
    CHECK(std::abs(integrate(derivative(f, 1))) < 1e-12 * std::max(1.0, norm));
}

TEST_CASE("Parseval identity") {
    const PeriodicGrid g = make_grid(8.0, 128);
    const RealField f = make_field(g, [&](double x) {
        return 0.7 + std::sin(2.0 * kPi * x / g.length) - 0.4 * std::cos(6.0 * kPi * x / g.length);
    });
    RealField f2{g, std::vector<double>(g.n)};
    for (int i = 0; i < g.n; ++i) f2.v[i] = f.v[i] * f.v[i];
    const double direct = integrate(f2);
    const auto hat = spectrum(f);
    double spectral = 0.0;
    for (const auto& c : hat) spectral += std::norm(c);
    spectral *= g.length / (static_cast<double>(g.n) * g.n);
    CHECK(std::abs(direct - spectral) / std::abs(direct) < 1e-12);
}

TEST_CASE("resample round trip is exact") {
    const PeriodicGrid g = make_grid(10.0, 64);
    const RealField f = make_field(g, [&](double x) {
        return std::cos(2.0 * kPi * x / g.length) + 0.2 * std::cos(kPi * g.n * x / g.length);
    });
    const RealField up = resample(f, 256);
    const RealField back = resample(up, g.n);
    CHECK(max_diff(back, f) < 1e-13);
}

TEST_CASE("antiderivative inverts derivative for zero-mean fields") {
    const PeriodicGrid g = make_grid(12.0, 128);
    const RealField f = make_field(g, [&](double x) {
        return std::sin(2.0 * kPi * x / g.length) + 0.25 * std::sin(8.0 * kPi * x / g.length);
    });
    const RealField fp = derivative(f, 1);
    const RealField rec = antiderivative(fp, f.v[0]);
    CHECK(max_diff(rec, f) < 1e-12);
    CHECK(rec.v[0] == doctest::Approx(f.v[0]));
}
