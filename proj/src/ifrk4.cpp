#include "ckdv/ifrk4.hpp"

#include <cmath>

#include "ckdv/kernels.hpp"

namespace ckdv {

IfRk4::IfRk4(std::vector<cplx> linear_symbol, int components) : lin_(std::move(linear_symbol)) {
    const std::size_t n = lin_.size();
    e1_.resize(n);
    e2_.resize(n);
    auto alloc = [&](std::vector<std::vector<cplx>>& v) {
        v.assign(components, std::vector<cplx>(n));
    };
    alloc(g1_);
    alloc(g2_);
    alloc(g3_);
    alloc(g4_);
    alloc(stage_);
    alloc(e1g3_);
}

void IfRk4::refresh_factors(double dt) {
    if (factors_ready_ && dt == cached_dt_) return;
    for (std::size_t k = 0; k < lin_.size(); ++k) {
        e1_[k] = std::exp(lin_[k] * (dt / 2.0));
        e2_[k] = e1_[k] * e1_[k];
    }
    cached_dt_ = dt;
    factors_ready_ = true;
}

void IfRk4::step(std::vector<std::vector<cplx>>& uhat, double dt, const RhsFn& rhs) {
    refresh_factors(dt);
    const int m = static_cast<int>(uhat.size());
    using kernels::caxpy;
    using kernels::cmul;

    rhs(uhat, g1_);
    for (int j = 0; j < m; ++j) {
        stage_[j] = uhat[j];
        caxpy(stage_[j], dt / 2.0, g1_[j]);
        cmul(stage_[j], e1_);
    }
    rhs(stage_, g2_);
    for (int j = 0; j < m; ++j) {
        stage_[j] = uhat[j];
        cmul(stage_[j], e1_);
        caxpy(stage_[j], dt / 2.0, g2_[j]);
    }
    rhs(stage_, g3_);
    for (int j = 0; j < m; ++j) {
        e1g3_[j] = g3_[j];
        cmul(e1g3_[j], e1_);
        stage_[j] = uhat[j];
        cmul(stage_[j], e2_);
        caxpy(stage_[j], dt, e1g3_[j]);
    }
    rhs(stage_, g4_);
    for (int j = 0; j < m; ++j) {
        cmul(uhat[j], e2_);
        cmul(g1_[j], e2_);
        caxpy(uhat[j], dt / 6.0, g1_[j]);
        cmul(g2_[j], e1_);
        caxpy(uhat[j], dt / 3.0, g2_[j]);
        caxpy(uhat[j], dt / 3.0, e1g3_[j]);
        caxpy(uhat[j], dt / 6.0, g4_[j]);
    }
}

} // namespace ckdv
