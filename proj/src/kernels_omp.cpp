#include "ckdv/kernels.hpp"

#include <cassert>
#include <cmath>

// OpenMP variants. schedule(static) partitions by index only, and each
// element is computed by the same expression as the serial reference, so
// the output is bit-identical for any thread count.

namespace ckdv::kernels {

void cmul_parallel(std::span<cplx> x, std::span<const cplx> f) {
    assert(x.size() == f.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) x[i] *= f[i];
}

void caxpy_parallel(std::span<cplx> x, double a, std::span<const cplx> y) {
    assert(x.size() == y.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) x[i] += a * y[i];
}

void phase_rotate_parallel(std::span<cplx> psi, std::span<const double> phase, double scale) {
    assert(psi.size() == phase.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(psi.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double th = scale * phase[i];
        psi[i] *= cplx(std::cos(th), std::sin(th));
    }
}

void abs2_parallel(std::span<double> out, std::span<const cplx> psi) {
    assert(out.size() == psi.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = std::norm(psi[i]);
}

void real_lincomb_parallel(std::span<double> out, std::span<const double> coeff,
                           std::span<const double* const> fields) {
    assert(coeff.size() == fields.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
    const std::ptrdiff_t nf = static_cast<std::ptrdiff_t>(fields.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::ptrdiff_t j = 0; j < nf; ++j) s += coeff[j] * fields[j][i];
        out[i] = s;
    }
}

void quadratic_form_parallel(std::span<double> out, std::span<const double> coeff,
                             std::span<const double* const> fields, int m) {
    assert(static_cast<int>(fields.size()) == m);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (int l = 0; l < m; ++l)
            for (int nn = 0; nn < m; ++nn) s += coeff[l * m + nn] * fields[l][i] * fields[nn][i];
        out[i] = s;
    }
}

void cubic_form_parallel(std::span<double> out, std::span<const double> coeff,
                         std::span<const double* const> fields, int m) {
    assert(static_cast<int>(fields.size()) == m);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = 0; q < m; ++q)
                for (int r = 0; r < m; ++r)
                    s += coeff[(p * m + q) * m + r] * fields[p][i] * fields[q][i] * fields[r][i];
        out[i] = s;
    }
}

double max_abs_parallel(std::span<const double> x) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
    double mx = 0.0;
#pragma omp parallel for schedule(static) reduction(max : mx)
    for (std::ptrdiff_t i = 0; i < n; ++i) mx = std::max(mx, std::abs(x[i]));
    return mx;
}

double max_abs_parallel(std::span<const cplx> x) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
    double mx = 0.0;
#pragma omp parallel for schedule(static) reduction(max : mx)
    for (std::ptrdiff_t i = 0; i < n; ++i) mx = std::max(mx, std::abs(x[i]));
    return mx;
}

} // namespace ckdv::kernels
