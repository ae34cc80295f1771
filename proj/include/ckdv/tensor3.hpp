#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace ckdv {

// Dense rank-3 tensor of shape m x m x m. m stays single-digit in every
// intended use, so symmetry-compressed storage is not worth the indexing.
class Tensor3 {
  public:
    Tensor3() = default;
    explicit Tensor3(int m, double fill = 0.0) : m_(m), a_(static_cast<std::size_t>(m) * m * m, fill) {}

    int dim() const { return m_; }

    double& operator()(int i, int j, int k) {
        assert(i >= 0 && i < m_ && j >= 0 && j < m_ && k >= 0 && k < m_);
        return a_[(static_cast<std::size_t>(i) * m_ + j) * m_ + k];
    }
    double operator()(int i, int j, int k) const {
        assert(i >= 0 && i < m_ && j >= 0 && j < m_ && k >= 0 && k < m_);
        return a_[(static_cast<std::size_t>(i) * m_ + j) * m_ + k];
    }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

  private:
    int m_ = 0;
    std::vector<double> a_;
};

} // namespace ckdv
