#pragma once

#include <complex>
#include <span>

// Hot inner loops shared by the spectral solvers. Every kernel exists twice:
// *_serial is the plain reference loop, *_parallel adds an OpenMP pragma.
// The dispatching wrapper picks one at runtime via set_parallel(). Both
// variants perform identical per-element arithmetic under a static schedule,
// so results are bit-identical; tests/test_kernels.cpp asserts exactly that
// and bench/kernels_bench.cpp times the two against each other.

namespace ckdv::kernels {

using cplx = std::complex<double>;

bool parallel_enabled() noexcept;
void set_parallel(bool on) noexcept;

// x[i] *= f[i]
void cmul(std::span<cplx> x, std::span<const cplx> f);
void cmul_serial(std::span<cplx> x, std::span<const cplx> f);
void cmul_parallel(std::span<cplx> x, std::span<const cplx> f);

// x[i] += a * y[i]
void caxpy(std::span<cplx> x, double a, std::span<const cplx> y);
void caxpy_serial(std::span<cplx> x, double a, std::span<const cplx> y);
void caxpy_parallel(std::span<cplx> x, double a, std::span<const cplx> y);

// psi[i] *= exp(i * scale * phase[i])
void phase_rotate(std::span<cplx> psi, std::span<const double> phase, double scale);
void phase_rotate_serial(std::span<cplx> psi, std::span<const double> phase, double scale);
void phase_rotate_parallel(std::span<cplx> psi, std::span<const double> phase, double scale);

// out[i] = |psi[i]|^2
void abs2(std::span<double> out, std::span<const cplx> psi);
void abs2_serial(std::span<double> out, std::span<const cplx> psi);
void abs2_parallel(std::span<double> out, std::span<const cplx> psi);

// out[i] = sum_j coeff[j] * fields[j][i]
void real_lincomb(std::span<double> out, std::span<const double> coeff,
                  std::span<const double* const> fields);
void real_lincomb_serial(std::span<double> out, std::span<const double> coeff,
                         std::span<const double* const> fields);
void real_lincomb_parallel(std::span<double> out, std::span<const double> coeff,
                           std::span<const double* const> fields);

// out[i] = sum_{l,n} coeff[l*m+n] * fields[l][i] * fields[n][i]
void quadratic_form(std::span<double> out, std::span<const double> coeff,
                    std::span<const double* const> fields, int m);
void quadratic_form_serial(std::span<double> out, std::span<const double> coeff,
                           std::span<const double* const> fields, int m);
void quadratic_form_parallel(std::span<double> out, std::span<const double> coeff,
                             std::span<const double* const> fields, int m);

// out[i] = sum_{p,q,r} coeff[(p*m+q)*m+r] * f_p[i] * f_q[i] * f_r[i]
void cubic_form(std::span<double> out, std::span<const double> coeff,
                std::span<const double* const> fields, int m);
void cubic_form_serial(std::span<double> out, std::span<const double> coeff,
                       std::span<const double* const> fields, int m);
void cubic_form_parallel(std::span<double> out, std::span<const double> coeff,
                         std::span<const double* const> fields, int m);

// max over i of |x[i]| (max is order-independent, so the OpenMP reduction
// stays bit-deterministic)
double max_abs(std::span<const double> x);
double max_abs_serial(std::span<const double> x);
double max_abs_parallel(std::span<const double> x);

double max_abs(std::span<const cplx> x);
double max_abs_serial(std::span<const cplx> x);
double max_abs_parallel(std::span<const cplx> x);

} // namespace ckdv::kernels
