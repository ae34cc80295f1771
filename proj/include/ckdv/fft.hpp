#pragma once

#include <complex>
#include <span>

// Thin wrapper around FFTW with a per-size plan cache. Conventions:
// forward is unnormalized, inverse carries the 1/n factor, so
// inverse(forward(x)) == x up to rounding. Plans are created once under a
// mutex with FFTW_ESTIMATE (deterministic plan choice) and executed through
// the thread-safe new-array interface, so transforms may run concurrently.

namespace ckdv::fft {

using cplx = std::complex<double>;

void forward(std::span<const cplx> in, std::span<cplx> out);
void inverse(std::span<const cplx> in, std::span<cplx> out);

void forward_inplace(std::span<cplx> x);
void inverse_inplace(std::span<cplx> x);

} // namespace ckdv::fft
