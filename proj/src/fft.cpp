#include "ckdv/fft.hpp"

#include <fftw3.h>

#include <cassert>
#include <map>
#include <mutex>
#include <vector>

namespace ckdv::fft {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

// Plans are made against scratch buffers and reused for arbitrary arrays via
// fftw_execute_dft; FFTW_UNALIGNED keeps that valid for any allocation.
PlanPair& plans_for(int n) {
    static std::mutex mu;
    static std::map<int, PlanPair> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<cplx> a(n), b(n);
    PlanPair p;
    p.fwd = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                             reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                             reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(n, p).first->second;
}

} // namespace

void forward(std::span<const cplx> in, std::span<cplx> out) {
    assert(in.size() == out.size());
    const int n = static_cast<int>(in.size());
    const auto& p = plans_for(n);
    fftw_execute_dft(p.fwd,
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse(std::span<const cplx> in, std::span<cplx> out) {
    assert(in.size() == out.size());
    const int n = static_cast<int>(in.size());
    const auto& p = plans_for(n);
    fftw_execute_dft(p.bwd,
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double inv = 1.0 / n;
    for (auto& v : out) v *= inv;
}

void forward_inplace(std::span<cplx> x) {
    thread_local std::vector<cplx> scratch;
    scratch.assign(x.begin(), x.end());
    forward(scratch, x);
}

void inverse_inplace(std::span<cplx> x) {
    thread_local std::vector<cplx> scratch;
    scratch.assign(x.begin(), x.end());
    inverse(scratch, x);
}

} // namespace ckdv::fft
