#pragma once

// Schur polynomial evaluation and the Cauchy-identity expansion of
// prod (1 - a_i conj(a_j) X)^{-1}, whose X^k coefficients equal
// sum |s_lambda(a)|^2 over partitions of weight k and length <= d.
//
// Schur values are computed by the Jacobi-Trudi determinant in the
// complete homogeneous basis, with h_k built from power sums through
// Newton's identities; this stays stable when entries of a repeat.
// The bialternant ratio is kept as a cross-check for well-separated a.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rsedge/partition.hpp"
#include "rsedge/power_series.hpp"

namespace rsedge {

namespace detail {

// Complete homogeneous symmetric polynomials h_0..h_K of alpha via
// Newton's identities: k h_k = sum_{j=1..k} p_j h_{k-j}.
inline std::vector<cdouble> complete_homogeneous(const std::vector<cdouble>& alpha, std::size_t K) {
  std::vector<cdouble> p(K + 1), h(K + 1);
  for (std::size_t j = 1; j <= K; ++j) {
    KahanComplexSum acc;
    for (const cdouble& a : alpha) acc.add(std::pow(a, static_cast<double>(j)));
    p[j] = acc.value();
  }
  h[0] = 1.0;
  for (std::size_t k = 1; k <= K; ++k) {
    KahanComplexSum acc;
    for (std::size_t j = 1; j <= k; ++j) acc.add(p[j] * h[k - j]);
    h[k] = acc.value() / static_cast<double>(k);
  }
  return h;
}

// Determinant by LU with partial pivoting.
inline cdouble det(std::vector<std::vector<cdouble>> m) {
  const std::size_t n = m.size();
  cdouble result = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (m[pivot][col] == cdouble{0.0}) return 0.0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      result = -result;
    }
    result *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const cdouble f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return result;
}

}  // namespace detail

inline cdouble schur_eval_bialternant(const Partition& lambda, const std::vector<cdouble>& alpha);

// s_lambda(alpha) by Jacobi-Trudi: det(h_{lambda_i - i + j}). In debug
// builds, when the alpha are pairwise separated by more than `tolerance`,
// the bialternant ratio is cross-checked to 1e-9 relative.
inline cdouble schur_eval(const Partition& lambda, const std::vector<cdouble>& alpha,
                          double tolerance = 1e-3) {
  if (alpha.empty()) throw std::invalid_argument("schur_eval: empty alpha");
  if (lambda.length() > alpha.size()) throw std::invalid_argument("schur_eval: partition longer than alpha");
  const std::size_t ell = lambda.length();
  if (ell == 0) return 1.0;
  const std::size_t K = static_cast<std::size_t>(lambda.part(0)) + ell;
  const auto h = detail::complete_homogeneous(alpha, K);
  std::vector<std::vector<cdouble>> m(ell, std::vector<cdouble>(ell));
  for (std::size_t i = 0; i < ell; ++i)
    for (std::size_t j = 0; j < ell; ++j) {
      const std::int64_t idx = lambda.part(i) - static_cast<std::int64_t>(i) + static_cast<std::int64_t>(j);
      m[i][j] = (idx < 0) ? cdouble{0.0} : h[static_cast<std::size_t>(idx)];
    }
  const cdouble value = detail::det(std::move(m));
#ifndef NDEBUG
  bool separated = true;
  for (std::size_t i = 0; i < alpha.size() && separated; ++i)
    for (std::size_t j = i + 1; j < alpha.size(); ++j)
      if (std::abs(alpha[i] - alpha[j]) <= tolerance) {
        separated = false;
        break;
      }
  if (separated) {
    const cdouble ratio = schur_eval_bialternant(lambda, alpha);
    assert(std::abs(value - ratio) <= 1e-9 * std::max(1.0, std::abs(value)));
  }
#else
  (void)tolerance;
#endif
  return value;
}

// Bialternant ratio det(a_i^{lambda_j + d - j}) / det(a_i^{d - j});
// valid only for pairwise distinct alpha.
inline cdouble schur_eval_bialternant(const Partition& lambda, const std::vector<cdouble>& alpha) {
  if (alpha.empty()) throw std::invalid_argument("schur_eval_bialternant: empty alpha");
  if (lambda.length() > alpha.size()) throw std::invalid_argument("schur_eval_bialternant: partition longer than alpha");
  const std::size_t d = alpha.size();
  std::vector<std::vector<cdouble>> num(d, std::vector<cdouble>(d)), den(d, std::vector<cdouble>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double e_num = static_cast<double>(lambda.part(j) + static_cast<std::int64_t>(d - 1 - j));
      const double e_den = static_cast<double>(d - 1 - j);
      num[i][j] = std::pow(alpha[i], e_num);
      den[i][j] = std::pow(alpha[i], e_den);
    }
  const cdouble denom = detail::det(std::move(den));
  if (denom == cdouble{0.0}) throw std::domain_error("schur_eval_bialternant: repeated alpha entries");
  return detail::det(std::move(num)) / denom;
}

// b_0..b_K of prod_{i,j} (1 - a_i conj(a_j) X)^{-1}.
inline PowerSeries cauchy_coefficients(const std::vector<cdouble>& alpha, std::size_t K) {
  if (alpha.empty()) throw std::invalid_argument("cauchy_coefficients: empty alpha");
  for (const cdouble& a : alpha)
    if (a == cdouble{0.0}) throw std::invalid_argument("cauchy_coefficients: zero alpha entry");
  PowerSeries prod = PowerSeries::one(K);
  for (const cdouble& ai : alpha)
    for (const cdouble& aj : alpha)
      prod = prod.mul(PowerSeries::geometric(ai * std::conj(aj), K));
  prod.at(0) = 1.0;  // b_0 = 1 exactly
  return prod;
}

// Same series through the Schur expansion: sum |s_lambda(a)|^2 X^{|lambda|}.
inline PowerSeries cauchy_via_schur(const std::vector<cdouble>& alpha, std::size_t K,
                                    std::size_t cap = 1000000) {
  if (alpha.empty()) throw std::invalid_argument("cauchy_via_schur: empty alpha");
  for (const cdouble& a : alpha)
    if (a == cdouble{0.0}) throw std::invalid_argument("cauchy_via_schur: zero alpha entry");
  std::vector<KahanSum> acc(K + 1);
  for_each_partition(static_cast<std::int64_t>(K), alpha.size(), cap, [&](const Partition& lambda) {
    const cdouble s = schur_eval(lambda, alpha);
    acc[static_cast<std::size_t>(lambda.weight())].add(std::norm(s));
  });
  PowerSeries out(K);
  for (std::size_t k = 0; k <= K; ++k) out.at(k) = acc[k].value();
  return out;
}

struct Lemma1Result {
  double b_d = 0.0;          // coefficient of X^d in the Cauchy expansion
  bool pass = false;         // b_d >= 1 - 1e-9
  double decomposition = 0.0;  // 1 + sum over |lambda|=d, len<=d-1 of |s_lambda|^2
};

// Checks b_d >= 1 for unimodular-product alpha, and returns the audit
// decomposition b_d = 1 + sum_{|lambda|=d, len(lambda)<=d-1} |s_lambda|^2.
inline Lemma1Result lemma1_check(const std::vector<cdouble>& alpha) {
  if (alpha.empty()) throw std::invalid_argument("lemma1_check: empty alpha");
  cdouble prod = 1.0;
  for (const cdouble& a : alpha) prod *= a;
  if (std::abs(std::abs(prod) - 1.0) > 1e-9)
    throw std::invalid_argument("lemma1_check: |prod alpha_i| != 1");

  const std::size_t d = alpha.size();
  Lemma1Result res;
  res.b_d = cauchy_coefficients(alpha, d)[d].real();

  KahanSum extra;
  for_each_partition(static_cast<std::int64_t>(d), d - 1, 1000000,
                     [&](const Partition& lambda) {
                       if (lambda.weight() != static_cast<std::int64_t>(d)) return;
                       extra.add(std::norm(schur_eval(lambda, alpha)));
                     });
  res.decomposition = 1.0 + extra.value();
  res.pass = res.b_d >= 1.0 - 1e-9;
  return res;
}

}  // namespace rsedge
