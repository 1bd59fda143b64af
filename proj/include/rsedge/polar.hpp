#pragma once

// Polar part of an L-function at s = 1: the Laurent coefficients
// r_{-m}, ..., r_{-1} (and optionally r_0).

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rsedge {

class PolarPart {
 public:
  // coefficients ordered r_{-1}, r_{-2}, ..., r_{-m}.
  explicit PolarPart(std::vector<std::complex<double>> neg_coefficients,
                     std::optional<std::complex<double>> r0 = std::nullopt,
                     std::optional<int> max_order = std::nullopt)
      : neg_(std::move(neg_coefficients)), r0_(r0) {
    if (neg_.empty()) throw std::invalid_argument("PolarPart: order must be >= 1");
    if (max_order && static_cast<int>(neg_.size()) > *max_order)
      throw std::invalid_argument("PolarPart: order exceeds the stated bound");
  }

  int order() const { return static_cast<int>(neg_.size()); }

  // r_{-k} for 1 <= k <= order.
  std::complex<double> r_neg(int k) const {
    if (k < 1 || k > order()) throw std::out_of_range("PolarPart: coefficient index");
    return neg_[static_cast<std::size_t>(k - 1)];
  }

  std::optional<std::complex<double>> r0() const { return r0_; }

  double abs_sum() const {
    double s = 0.0;
    for (const auto& r : neg_) s += std::abs(r);
    return s;
  }

 private:
  std::vector<std::complex<double>> neg_;
  std::optional<std::complex<double>> r0_;
};

}  // namespace rsedge
