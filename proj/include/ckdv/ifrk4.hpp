#pragma once

#include <complex>
#include <functional>
#include <vector>

// Fourth-order integrating-factor Runge-Kutta in spectral space. The stiff
// linear term (symbol lin[k], the same for every component) is integrated
// exactly through E1 = exp(lin dt/2); the nonlinear remainder goes through
// classical RK4 stages. Pure-imaginary symbols keep |E1| = 1, so the linear
// part is neutrally stable at any step size.

namespace ckdv {

class IfRk4 {
  public:
    using cplx = std::complex<double>;
    // rhs(state_hat, out_hat): spectral nonlinear right-hand side
    using RhsFn =
        std::function<void(const std::vector<std::vector<cplx>>&, std::vector<std::vector<cplx>>&)>;

    IfRk4(std::vector<cplx> linear_symbol, int components);

    // one step of size dt (dt may be negative)
    void step(std::vector<std::vector<cplx>>& uhat, double dt, const RhsFn& rhs);

  private:
    void refresh_factors(double dt);

    std::vector<cplx> lin_;
    double cached_dt_ = 0.0;
    bool factors_ready_ = false;
    std::vector<cplx> e1_, e2_;
    std::vector<std::vector<cplx>> g1_, g2_, g3_, g4_, stage_, e1g3_;
};

} // namespace ckdv
