// Times the serial reference kernels against their OpenMP variants, plus the
// batched FFT path used by the steppers. Build target only; not a test.
//
//   ./kernels_bench [repeats]

#include <chrono>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include <omp.h>

#include "ckdv/fft.hpp"
#include "ckdv/kernels.hpp"

using namespace ckdv;
using kernels::cplx;

namespace {

std::mt19937 rng(42);

std::vector<double> random_reals(std::size_t n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

std::vector<cplx> random_cplx(std::size_t n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(dist(rng), dist(rng));
    return v;
}

template <typename F>
double time_ms(int repeats, F&& f) {
    using clock = std::chrono::steady_clock;
    f(); // warm up
    const auto t0 = clock::now();
    for (int r = 0; r < repeats; ++r) f();
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count() / repeats;
}

void row(const char* name, std::size_t n, double serial_ms, double parallel_ms) {
    std::printf("%-16s %8zu %12.4f %12.4f %8.2fx\n", name, n, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

} // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 200;
    std::printf("threads: %d, repeats per measurement: %d\n", omp_get_max_threads(), repeats);
    std::printf("%-16s %8s %12s %12s %8s\n", "kernel", "n", "serial ms", "parallel ms",
                "speedup");

    for (std::size_t n : {4096u, 16384u, 65536u}) {
        {
            auto x = random_cplx(n);
            const auto f = random_cplx(n);
            const double s = time_ms(repeats, [&] { kernels::cmul_serial(x, f); });
            const double p = time_ms(repeats, [&] { kernels::cmul_parallel(x, f); });
            row("cmul", n, s, p);
        }
        {
            auto psi = random_cplx(n);
            const auto phase = random_reals(n);
            const double s =
                time_ms(repeats, [&] { kernels::phase_rotate_serial(psi, phase, -1e-3); });
            const double p =
                time_ms(repeats, [&] { kernels::phase_rotate_parallel(psi, phase, -1e-3); });
            row("phase_rotate", n, s, p);
        }
        {
            const auto a = random_reals(n), b = random_reals(n), c = random_reals(n);
            const double* fields[] = {a.data(), b.data(), c.data()};
            const auto coeff = random_reals(9);
            std::vector<double> out(n);
            const double s =
                time_ms(repeats, [&] { kernels::quadratic_form_serial(out, coeff, fields, 3); });
            const double p =
                time_ms(repeats, [&] { kernels::quadratic_form_parallel(out, coeff, fields, 3); });
            row("quadratic_form", n, s, p);
        }
        {
            const auto a = random_reals(n), b = random_reals(n);
            const double* fields[] = {a.data(), b.data()};
            const auto coeff = random_reals(8);
            std::vector<double> out(n);
            const double s =
                time_ms(repeats, [&] { kernels::cubic_form_serial(out, coeff, fields, 2); });
            const double p =
                time_ms(repeats, [&] { kernels::cubic_form_parallel(out, coeff, fields, 2); });
            row("cubic_form", n, s, p);
        }
        {
            // batched transforms: serial loop vs OpenMP over components
            const int batch = 3;
            std::vector<std::vector<cplx>> fields(batch), out(batch, std::vector<cplx>(n));
            for (auto& f : fields) f = random_cplx(n);
            const double s = time_ms(repeats, [&] {
                for (int j = 0; j < batch; ++j) fft::forward(fields[j], out[j]);
            });
            const double p = time_ms(repeats, [&] {
#pragma omp parallel for schedule(static)
                for (int j = 0; j < batch; ++j) fft::forward(fields[j], out[j]);
            });
            row("fft_batch3", n, s, p);
        }
    }
    return 0;
}
