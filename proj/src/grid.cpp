#include "ckdv/grid.hpp"

#include <cmath>
#include <numbers>

#include "ckdv/fft.hpp"

namespace ckdv {

namespace {
constexpr double kPi = std::numbers::pi;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// (i*k)^order without going through pow()
cplx ik_power(double k, int order) {
    const cplx ik(0.0, k);
    cplx r(1.0, 0.0);
    for (int i = 0; i < order; ++i) r *= ik;
    return r;
}
} // namespace

std::vector<double> PeriodicGrid::points() const {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = x(i);
    return xs;
}

double PeriodicGrid::wavenumber(int j) const { return 2.0 * kPi * mode_index(j) / length; }

PeriodicGrid make_grid(double length, int n) {
    if (!(length > 0.0)) throw Error("grid length must be positive");
    if (n < 8 || !power_of_two(n)) throw Error("grid size must be a power of two, n >= 8");
    return PeriodicGrid{length, n};
}

RealField make_field(const PeriodicGrid& g, const std::function<double(double)>& f) {
    RealField out{g, std::vector<double>(g.n)};
    for (int i = 0; i < g.n; ++i) out.v[i] = f(g.x(i));
    return out;
}

ComplexField make_complex_field(const PeriodicGrid& g, const std::function<cplx(double)>& f) {
    ComplexField out{g, std::vector<cplx>(g.n)};
    for (int i = 0; i < g.n; ++i) out.v[i] = f(g.x(i));
    return out;
}

RealField zero_field(const PeriodicGrid& g) { return RealField{g, std::vector<double>(g.n, 0.0)}; }

double wrapped_distance(const PeriodicGrid& g, double x, double x0) {
    double d = std::fmod(x - x0, g.length);
    if (d < -0.5 * g.length) d += g.length;
    if (d >= 0.5 * g.length) d -= g.length;
    return d;
}

void check_same_grid(const PeriodicGrid& a, const PeriodicGrid& b) {
    if (!(a == b)) throw DimensionMismatch("fields live on different grids");
}

std::vector<cplx> spectrum(const RealField& f) {
    std::vector<cplx> buf(f.v.begin(), f.v.end());
    fft::forward_inplace(buf);
    return buf;
}

std::vector<cplx> spectrum(const ComplexField& f) {
    std::vector<cplx> buf(f.v);
    fft::forward_inplace(buf);
    return buf;
}

RealField field_from_spectrum(const PeriodicGrid& g, std::span<const cplx> hat) {
    std::vector<cplx> buf(hat.size());
    fft::inverse(hat, buf);
    RealField out{g, std::vector<double>(g.n)};
    for (int i = 0; i < g.n; ++i) out.v[i] = buf[i].real();
    return out;
}

ComplexField complex_field_from_spectrum(const PeriodicGrid& g, std::span<const cplx> hat) {
    ComplexField out{g, std::vector<cplx>(g.n)};
    fft::inverse(hat, std::span<cplx>(out.v));
    return out;
}

std::vector<cplx> resize_spectrum(std::span<const cplx> hat, int n_to) {
    const int n_from = static_cast<int>(hat.size());
    if (n_to == n_from) return std::vector<cplx>(hat.begin(), hat.end());
    const double scale = static_cast<double>(n_to) / n_from;
    std::vector<cplx> out(n_to, cplx(0.0, 0.0));
    if (n_to > n_from) {
        const int half = n_from / 2;
        for (int j = 0; j < half; ++j) out[j] = scale * hat[j];
        for (int j = 1; j < half; ++j) out[n_to - j] = scale * hat[n_from - j];
        // split the Nyquist coefficient so real inputs stay real
        out[half] = 0.5 * scale * hat[half];
        out[n_to - half] = 0.5 * scale * hat[half];
    } else {
        const int half = n_to / 2;
        for (int j = 0; j < half; ++j) out[j] = scale * hat[j];
        for (int j = 1; j < half; ++j) out[n_to - j] = scale * hat[n_from - j];
        // fold the two bins that meet at the coarse Nyquist
        out[half] = scale * (hat[half] + hat[n_from - half]);
    }
    return out;
}

namespace {

template <typename FieldT>
FieldT derivative_impl(const FieldT& f, int order) {
    if (order < 1) throw Error("derivative order must be >= 1");
    auto hat = spectrum(f);
    const int n = f.grid.n;
    for (int j = 0; j < n; ++j) hat[j] *= ik_power(f.grid.wavenumber(j), order);
    if (order % 2 == 1) hat[n / 2] = cplx(0.0, 0.0);
    if constexpr (std::is_same_v<FieldT, RealField>)
        return field_from_spectrum(f.grid, hat);
    else
        return complex_field_from_spectrum(f.grid, hat);
}

} // namespace

RealField derivative(const RealField& f, int order) { return derivative_impl(f, order); }
ComplexField derivative(const ComplexField& f, int order) { return derivative_impl(f, order); }

double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

double integrate(const RealField& f) { return f.grid.spacing() * pairwise_sum(f.v); }

cplx integrate(const ComplexField& f) {
    std::vector<double> re(f.grid.n), im(f.grid.n);
    for (int i = 0; i < f.grid.n; ++i) {
        re[i] = f.v[i].real();
        im[i] = f.v[i].imag();
    }
    return f.grid.spacing() * cplx(pairwise_sum(re), pairwise_sum(im));
}

double mean(const RealField& f) { return pairwise_sum(f.v) / f.grid.n; }

RealField dealias_product(std::span<const RealField* const> factors) {
    if (factors.size() < 2 || factors.size() > 3)
        throw Error("dealias_product takes 2 or 3 factors");
    const PeriodicGrid g = factors[0]->grid;
    for (const auto* f : factors) check_same_grid(g, f->grid);

    const int n = g.n;
    const int fine_n = 2 * n;
    std::vector<cplx> fine(fine_n);
    std::vector<double> prod;
    for (std::size_t idx = 0; idx < factors.size(); ++idx) {
        auto hat = resize_spectrum(spectrum(*factors[idx]), fine_n);
        fft::inverse(hat, fine);
        if (idx == 0) {
            prod.resize(fine_n);
            for (int i = 0; i < fine_n; ++i) prod[i] = fine[i].real();
        } else {
            for (int i = 0; i < fine_n; ++i) prod[i] *= fine[i].real();
        }
    }
    std::vector<cplx> buf(prod.begin(), prod.end());
    fft::forward_inplace(buf);
    return field_from_spectrum(g, resize_spectrum(buf, n));
}

RealField dealias_product(const RealField& a, const RealField& b) {
    const RealField* fs[] = {&a, &b};
    return dealias_product(std::span<const RealField* const>(fs));
}

RealField dealias_product(const RealField& a, const RealField& b, const RealField& c) {
    const RealField* fs[] = {&a, &b, &c};
    return dealias_product(std::span<const RealField* const>(fs));
}

RealField resample(const RealField& f, int n_to) {
    if (!power_of_two(n_to) || n_to < 8) throw Error("resample target must be a power of two, >= 8");
    PeriodicGrid g{f.grid.length, n_to};
    return field_from_spectrum(g, resize_spectrum(spectrum(f), n_to));
}

ComplexField resample(const ComplexField& f, int n_to) {
    if (!power_of_two(n_to) || n_to < 8) throw Error("resample target must be a power of two, >= 8");
    PeriodicGrid g{f.grid.length, n_to};
    return complex_field_from_spectrum(g, resize_spectrum(spectrum(f), n_to));
}

RealField antiderivative(const RealField& f, double value_at_origin) {
    auto hat = spectrum(f);
    const int n = f.grid.n;
    hat[0] = cplx(0.0, 0.0);
    for (int j = 1; j < n; ++j) {
        if (j == n / 2) {
            hat[j] = cplx(0.0, 0.0);
            continue;
        }
        hat[j] /= cplx(0.0, f.grid.wavenumber(j));
    }
    RealField out = field_from_spectrum(f.grid, hat);
    const double shift = value_at_origin - out.v[0];
    for (auto& v : out.v) v += shift;
    return out;
}

} // namespace ckdv
