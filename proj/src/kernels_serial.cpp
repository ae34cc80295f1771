#include "ckdv/kernels.hpp"

#include <atomic>
#include <cassert>
#include <cmath>

namespace ckdv::kernels {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() noexcept { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) noexcept { g_parallel.store(on, std::memory_order_relaxed); }

void cmul_serial(std::span<cplx> x, std::span<const cplx> f) {
    assert(x.size() == f.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= f[i];
}

void caxpy_serial(std::span<cplx> x, double a, std::span<const cplx> y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += a * y[i];
}

void phase_rotate_serial(std::span<cplx> psi, std::span<const double> phase, double scale) {
    assert(psi.size() == phase.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double th = scale * phase[i];
        psi[i] *= cplx(std::cos(th), std::sin(th));
    }
}

void abs2_serial(std::span<double> out, std::span<const cplx> psi) {
    assert(out.size() == psi.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(psi[i]);
}

void real_lincomb_serial(std::span<double> out, std::span<const double> coeff,
                         std::span<const double* const> fields) {
    assert(coeff.size() == fields.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < fields.size(); ++j) s += coeff[j] * fields[j][i];
        out[i] = s;
    }
}

void quadratic_form_serial(std::span<double> out, std::span<const double> coeff,
                           std::span<const double* const> fields, int m) {
    assert(static_cast<int>(fields.size()) == m);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (int l = 0; l < m; ++l)
            for (int n = 0; n < m; ++n) s += coeff[l * m + n] * fields[l][i] * fields[n][i];
        out[i] = s;
    }
}

void cubic_form_serial(std::span<double> out, std::span<const double> coeff,
                       std::span<const double* const> fields, int m) {
    assert(static_cast<int>(fields.size()) == m);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = 0; q < m; ++q)
                for (int r = 0; r < m; ++r)
                    s += coeff[(p * m + q) * m + r] * fields[p][i] * fields[q][i] * fields[r][i];
        out[i] = s;
    }
}

double max_abs_serial(std::span<const double> x) {
    double mx = 0.0;
    for (double v : x) mx = std::max(mx, std::abs(v));
    return mx;
}

double max_abs_serial(std::span<const cplx> x) {
    double mx = 0.0;
    for (const cplx& v : x) mx = std::max(mx, std::abs(v));
    return mx;
}

// dispatchers; arrays below the threshold run serial (the fork/join overhead
// outweighs the work — see bench/kernels_bench.cpp), results are bit-equal
// either way

namespace {
constexpr std::size_t kParallelThreshold = 8192;

bool go_parallel(std::size_t n) { return parallel_enabled() && n >= kParallelThreshold; }
} // namespace

void cmul(std::span<cplx> x, std::span<const cplx> f) {
    go_parallel(x.size()) ? cmul_parallel(x, f) : cmul_serial(x, f);
}
void caxpy(std::span<cplx> x, double a, std::span<const cplx> y) {
    go_parallel(x.size()) ? caxpy_parallel(x, a, y) : caxpy_serial(x, a, y);
}
void phase_rotate(std::span<cplx> psi, std::span<const double> phase, double scale) {
    go_parallel(psi.size()) ? phase_rotate_parallel(psi, phase, scale)
                            : phase_rotate_serial(psi, phase, scale);
}
void abs2(std::span<double> out, std::span<const cplx> psi) {
    go_parallel(out.size()) ? abs2_parallel(out, psi) : abs2_serial(out, psi);
}
void real_lincomb(std::span<double> out, std::span<const double> coeff,
                  std::span<const double* const> fields) {
    go_parallel(out.size()) ? real_lincomb_parallel(out, coeff, fields)
                            : real_lincomb_serial(out, coeff, fields);
}
void quadratic_form(std::span<double> out, std::span<const double> coeff,
                    std::span<const double* const> fields, int m) {
    go_parallel(out.size()) ? quadratic_form_parallel(out, coeff, fields, m)
                            : quadratic_form_serial(out, coeff, fields, m);
}
void cubic_form(std::span<double> out, std::span<const double> coeff,
                std::span<const double* const> fields, int m) {
    go_parallel(out.size()) ? cubic_form_parallel(out, coeff, fields, m)
                            : cubic_form_serial(out, coeff, fields, m);
}
double max_abs(std::span<const double> x) {
    return go_parallel(x.size()) ? max_abs_parallel(x) : max_abs_serial(x);
}
double max_abs(std::span<const cplx> x) {
    return go_parallel(x.size()) ? max_abs_parallel(x) : max_abs_serial(x);
}

} // namespace ckdv::kernels
