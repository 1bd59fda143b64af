#pragma once

// Truncated complex power series with exact arithmetic up to the
// truncation order, plus compensated-summation helpers used throughout
// the numerical series code.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rsedge {

using cdouble = std::complex<double>;

// Kahan-compensated accumulator for doubles.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Componentwise Kahan accumulator for complex values.
class KahanComplexSum {
 public:
  void add(cdouble v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  cdouble value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_;
  KahanSum im_;
};

/// Coefficients b_0..b_K of a power series truncated at order K.
class PowerSeries {
 public:
  explicit PowerSeries(std::size_t order) : coeff_(order + 1) {}

  explicit PowerSeries(std::vector<cdouble> coeff) : coeff_(std::move(coeff)) {
    if (coeff_.empty()) throw std::invalid_argument("PowerSeries: empty coefficient list");
  }

  static PowerSeries one(std::size_t order) {
    PowerSeries s(order);
    s.coeff_[0] = 1.0;
    return s;
  }

  // 1 / (1 - ratio * X), truncated.
  static PowerSeries geometric(cdouble ratio, std::size_t order) {
    PowerSeries s(order);
    cdouble pow = 1.0;
    for (std::size_t k = 0; k <= order; ++k) {
      s.coeff_[k] = pow;
      pow *= ratio;
    }
    return s;
  }

  std::size_t order() const { return coeff_.size() - 1; }

  cdouble operator[](std::size_t k) const {
    return k < coeff_.size() ? coeff_[k] : cdouble{0.0};
  }

  cdouble& at(std::size_t k) { return coeff_.at(k); }

  const std::vector<cdouble>& coefficients() const { return coeff_; }

  // Cauchy product, truncated at the smaller order.
  PowerSeries mul(const PowerSeries& other) const {
    const std::size_t ord = std::min(order(), other.order());
    PowerSeries out(ord);
    for (std::size_t k = 0; k <= ord; ++k) {
      KahanComplexSum acc;
      for (std::size_t i = 0; i <= k; ++i) acc.add(coeff_[i] * other.coeff_[k - i]);
      out.coeff_[k] = acc.value();
    }
    return out;
  }

  // Multiplicative inverse mod X^{K+1}; requires a unit constant term.
  PowerSeries reciprocal() const {
    if (coeff_[0] == cdouble{0.0}) throw std::domain_error("PowerSeries: reciprocal of series with zero constant term");
    PowerSeries out(order());
    out.coeff_[0] = 1.0 / coeff_[0];
    for (std::size_t k = 1; k <= order(); ++k) {
      KahanComplexSum acc;
      for (std::size_t i = 1; i <= k; ++i) acc.add(coeff_[i] * out.coeff_[k - i]);
      out.coeff_[k] = -acc.value() / coeff_[0];
    }
    return out;
  }

 private:
  std::vector<cdouble> coeff_;
};

}  // namespace rsedge
