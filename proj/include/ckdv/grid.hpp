#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "ckdv/errors.hpp"

namespace ckdv {

using cplx = std::complex<double>;

// Uniform periodic grid x_i = i * length / n, i = 0..n-1. n must be a power
// of two, at least 8.
struct PeriodicGrid {
    double length = 0.0;
    int n = 0;

    double spacing() const { return length / n; }
    double x(int i) const { return i * spacing(); }
    std::vector<double> points() const;

    // signed integer wavenumber of FFT bin j (j = n/2 maps to the Nyquist
    // index +n/2)
    int mode_index(int j) const { return j <= n / 2 ? j : j - n; }
    // angular wavenumber 2*pi*k/length of FFT bin j
    double wavenumber(int j) const;

    bool operator==(const PeriodicGrid&) const = default;
};

// Validating constructor used everywhere a grid enters from the outside.
PeriodicGrid make_grid(double length, int n);

struct RealField {
    PeriodicGrid grid;
    std::vector<double> v;
};

struct ComplexField {
    PeriodicGrid grid;
    std::vector<cplx> v;
};

RealField make_field(const PeriodicGrid& g, const std::function<double(double)>& f);
ComplexField make_complex_field(const PeriodicGrid& g, const std::function<cplx(double)>& f);
RealField zero_field(const PeriodicGrid& g);

// displacement x - x0 wrapped to [-length/2, length/2); for evaluating
// localized profiles without a seam at the domain edge
double wrapped_distance(const PeriodicGrid& g, double x, double x0);

void check_same_grid(const PeriodicGrid& a, const PeriodicGrid& b);

// Fourier coefficients under the forward-unnormalized convention.
std::vector<cplx> spectrum(const RealField& f);
std::vector<cplx> spectrum(const ComplexField& f);
RealField field_from_spectrum(const PeriodicGrid& g, std::span<const cplx> hat);
ComplexField complex_field_from_spectrum(const PeriodicGrid& g, std::span<const cplx> hat);

// Re-express a spectrum of size n_from as one of size n_to describing the
// same trigonometric interpolant (Nyquist split on padding, folded on
// truncation; amplitude rescaled for the 1/n inverse convention).
std::vector<cplx> resize_spectrum(std::span<const cplx> hat, int n_to);

// Spectral differentiation: mode k picks up (i*k)^order; the Nyquist mode is
// zeroed for odd orders.
RealField derivative(const RealField& f, int order);
ComplexField derivative(const ComplexField& f, int order);

// Rectangle rule, spectrally accurate on a periodic domain.
double integrate(const RealField& f);
cplx integrate(const ComplexField& f);
double mean(const RealField& f);

// Pointwise product of 2 or 3 factors computed on a 2n grid and truncated
// back to n modes; alias-free for quadratic and cubic terms.
RealField dealias_product(std::span<const RealField* const> factors);
RealField dealias_product(const RealField& a, const RealField& b);
RealField dealias_product(const RealField& a, const RealField& b, const RealField& c);

// Same trig interpolant sampled on a different power-of-two resolution.
RealField resample(const RealField& f, int n_to);
ComplexField resample(const ComplexField& f, int n_to);

// Periodic antiderivative F with F' = f and F(x_0) = value_at_origin.
// Requires zero-mean f for periodicity; the k=0 and Nyquist bins are zeroed.
RealField antiderivative(const RealField& f, double value_at_origin = 0.0);

// Deterministic pairwise sum.
double pairwise_sum(std::span<const double> x);

} // namespace ckdv
