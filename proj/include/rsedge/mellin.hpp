#pragma once

// Smooth test windows and their numerical Mellin machinery.
//
// The canonical window is a C-infinity plateau bump: 1 on [1,2],
// supported on [a,b] (defaults 1/2 and 4), with exp(-kappa/u)
// smoothstep ramps. All integrals are done in u = log x, where the
// transform integrand oscillates uniformly: psi^(s) = int g(u)
// e^{(s-1)u} du with g(u) = psi(e^u) e^u. Panels of 32-point
// Gauss-Legendre nodes are precomputed per window; a coarse grid at
// half the panel count provides the quadrature error estimate.
//
// Derivatives of psi^ at s = 1 are the moments int g(u) u^j du, never
// numerical differences.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

#include "rsedge/conductor.hpp"
#include "rsedge/lseries.hpp"
#include "rsedge/polar.hpp"
#include "rsedge/power_series.hpp"
#include "rsedge/primes.hpp"

namespace rsedge {

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline const std::pair<std::vector<double>, std::vector<double>>& legendre_rule(int n) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

struct QuadratureGrid {
  std::vector<double> u;   // nodes in log x
  std::vector<double> wg;  // weight * psi(e^u) * e^u
};

inline QuadratureGrid build_grid(const std::function<double(double)>& psi, double a, double b,
                                 int panels, int nodes_per_panel) {
  const auto& [xs, ws] = legendre_rule(nodes_per_panel);
  QuadratureGrid grid;
  grid.u.reserve(static_cast<std::size_t>(panels) * nodes_per_panel);
  grid.wg.reserve(grid.u.capacity());
  const double lo = std::log(a), hi = std::log(b);
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (int i = 0; i < nodes_per_panel; ++i) {
      const double u = mid + 0.5 * h * xs[i];
      const double x = std::exp(u);
      grid.u.push_back(u);
      grid.wg.push_back(0.5 * h * ws[i] * psi(x) * x);
    }
  }
  return grid;
}

// exp(-kappa/u) smoothstep: 0 below 0, 1 above 1.
inline double smoothstep(double u, double kappa) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double f0 = std::exp(-kappa / u);
  const double f1 = std::exp(-kappa / (1.0 - u));
  return f0 / (f0 + f1);
}

}  // namespace detail

enum class WindowKind { plateau, mellin_one, custom };

class SmoothWindow {
 public:
  static constexpr double default_kappa = 2.0;

  // Canonical plateau window: psi = 1 on [1,2], supported on [a,b].
  static SmoothWindow plateau(double a = 0.5, double b = 4.0, double kappa = default_kappa) {
    if (!(0.0 < a && a < 1.0 && b > 2.0))
      throw std::invalid_argument("SmoothWindow: plateau needs 0 < a < 1 and b > 2");
    SmoothWindow w;
    w.kind_ = WindowKind::plateau;
    w.a_ = a;
    w.b_ = b;
    const double ka = kappa;
    w.eval_ = [a, b, ka](double x) {
      if (x <= a || x >= b) return 0.0;
      if (x < 1.0) return detail::smoothstep((x - a) / (1.0 - a), ka);
      if (x <= 2.0) return 1.0;
      return detail::smoothstep((b - x) / (b - 2.0), ka);
    };
    w.build_grids();
    return w;
  }

  // Plateau shape rescaled so that psi^(1) = 1.
  static SmoothWindow mellin_one(double a = 0.5, double b = 4.0, double kappa = default_kappa) {
    SmoothWindow w = plateau(a, b, kappa);
    w.kind_ = WindowKind::mellin_one;
    w.scale_ = 1.0 / w.transform_raw_fine(cdouble{1.0, 0.0}).real();
    if (std::abs(w.transform(cdouble{1.0, 0.0}).real() - 1.0) > 1e-10)
      throw std::logic_error("SmoothWindow: mellin_one normalization failed");
    return w;
  }

  // Arbitrary evaluator on [a,b] (test hook; invariants not enforced).
  static SmoothWindow custom(std::function<double(double)> fn, double a, double b) {
    if (!(0.0 < a && a < b)) throw std::invalid_argument("SmoothWindow: invalid support interval");
    SmoothWindow w;
    w.kind_ = WindowKind::custom;
    w.a_ = a;
    w.b_ = b;
    w.eval_ = std::move(fn);
    w.build_grids();
    return w;
  }

  WindowKind kind() const { return kind_; }
  double support_lo() const { return a_; }
  double support_hi() const { return b_; }

  double psi(double x) const {
    if (x <= a_ || x >= b_) return 0.0;
    return scale_ * eval_(x);
  }

  // psi^(s) = int psi(x) x^{s-1} dx, entire in s by compact support.
  // Throws if the coarse/fine quadrature discrepancy exceeds tol.
  cdouble transform(cdouble s, double tol = 1e-10) const {
    const cdouble fine = transform_raw_fine(s) * scale_;
    const cdouble coarse = transform_raw(coarse_, s) * scale_;
    if (std::abs(fine - coarse) > tol)
      throw std::runtime_error("SmoothWindow: quadrature failed to reach tolerance");
    return fine;
  }

  // psi^{(j)}(1) = int psi(x) log^j(x) dx (moment integrals).
  double moment(int j) const {
    KahanSum acc;
    for (std::size_t i = 0; i < fine_.u.size(); ++i)
      acc.add(fine_.wg[i] * std::pow(fine_.u[i], j));
    return scale_ * acc.value();
  }

  // (1/2pi) int_{-T}^{T} psi^(sigma+i tau) x^{-sigma-i tau} d tau, the
  // tau-integral done in closed form under the quadrature sum:
  // int e^{i tau Delta} = 2 sin(T Delta)/Delta, Delta = u_i - log x.
  double inversion_truncated(double x, double T, double sigma = 2.0) const {
    const double lx = std::log(x);
    KahanSum acc;
    for (std::size_t i = 0; i < fine_.u.size(); ++i) {
      const double delta = fine_.u[i] - lx;
      const double kernel = (std::abs(delta) < 1e-14) ? 2.0 * T : 2.0 * std::sin(T * delta) / delta;
      acc.add(fine_.wg[i] * std::exp((sigma - 1.0) * fine_.u[i]) * kernel);
    }
    return scale_ * std::pow(x, -sigma) * acc.value() / (2.0 * std::numbers::pi);
  }

 private:
  void build_grids() {
    fine_ = detail::build_grid(eval_, a_, b_, 96, 32);
    coarse_ = detail::build_grid(eval_, a_, b_, 48, 32);
  }

  cdouble transform_raw(const detail::QuadratureGrid& grid, cdouble s) const {
    KahanComplexSum acc;
    const cdouble sm1 = s - cdouble{1.0, 0.0};
    for (std::size_t i = 0; i < grid.u.size(); ++i)
      acc.add(grid.wg[i] * std::exp(sm1 * grid.u[i]));
    return acc.value();
  }

  cdouble transform_raw_fine(cdouble s) const { return transform_raw(fine_, s); }

  WindowKind kind_ = WindowKind::plateau;
  double a_ = 0.5, b_ = 4.0;
  double scale_ = 1.0;
  std::function<double(double)> eval_;
  detail::QuadratureGrid fine_, coarse_;
};

inline SmoothWindow make_window(WindowKind kind, double a = 0.5, double b = 4.0) {
  switch (kind) {
    case WindowKind::plateau:
      return SmoothWindow::plateau(a, b);
    case WindowKind::mellin_one:
      return SmoothWindow::mellin_one(a, b);
    default:
      throw std::invalid_argument("make_window: custom windows need an evaluator");
  }
}

inline cdouble mellin_transform(const SmoothWindow& w, cdouble s, double tol = 1e-10) {
  return w.transform(s, tol);
}

// F(Y) = sum over n <= N coprime to `exclude` of lambda(n) psi(n/Y);
// exact finite sum (real part; the intended streams are real).
inline double smoothed_sum(const CoefficientStream& stream, const SmoothWindow& w, double Y,
                           const std::set<std::int64_t>& exclude = {}) {
  if (Y <= 0.0) throw std::invalid_argument("smoothed_sum: Y must be positive");
  if (w.support_hi() * Y > static_cast<double>(stream.N) + 0.5)
    throw std::length_error("smoothed_sum: stream truncation too short for the window support");
  const auto lo = static_cast<std::int64_t>(std::max(1.0, std::ceil(w.support_lo() * Y)));
  const auto hi = std::min<std::int64_t>(stream.N, static_cast<std::int64_t>(std::floor(w.support_hi() * Y)));
  KahanSum acc;
  for (std::int64_t n = lo; n <= hi; ++n) {
    bool skip = false;
    for (const std::int64_t p : exclude)
      if (n % p == 0) {
        skip = true;
        break;
      }
    if (skip) continue;
    const double psi = w.psi(static_cast<double>(n) / Y);
    if (psi == 0.0) continue;
    acc.add(stream.values[static_cast<std::size_t>(n)].real() * psi);
  }
  return acc.value();
}

struct Lemma2Result {
  double F = 0.0;
  double floor = 0.0;
  bool pass = false;
  std::int64_t window_primes = 0;  // A: primes with p^d in [Y, 2Y]
  std::int64_t excluded = 0;       // B: |S|
};

// F(Y) >= 1/2 #{p not in S : Y <= p^d <= 2Y} for pi x pi~ streams, by
// b(p^d) >= 1 termwise; when A < 2B the guard reports floor = A - B <= A/2
// and the check is vacuous.
inline Lemma2Result lemma2_bound(const CoefficientStream& stream, int d, double Y,
                                 const std::set<std::int64_t>& S) {
  if (!stream.positivity_flag)
    throw std::invalid_argument("lemma2_bound: stream is not of pi x pi~ type");
  static const SmoothWindow window = SmoothWindow::plateau();

  Lemma2Result res;
  res.F = smoothed_sum(stream, window, Y, S);
  res.window_primes = count_primes_in_dth_window(Y, d);
  res.excluded = static_cast<std::int64_t>(S.size());

  std::int64_t off_s = 0;
  {
    const double hi_real = std::pow(2.0 * Y, 1.0 / d);
    const auto upper = static_cast<std::int64_t>(std::floor(hi_real)) + 2;
    const auto is_prime = sieve_is_prime(upper);
    for (std::int64_t p = 2; p <= upper; ++p) {
      if (!is_prime[static_cast<std::size_t>(p)] || S.count(p)) continue;
      double pd = 1.0;
      for (int i = 0; i < d; ++i) pd *= static_cast<double>(p);
      if (pd >= Y && pd <= 2.0 * Y) ++off_s;
    }
  }

  if (res.window_primes >= 2 * res.excluded)
    res.floor = 0.5 * static_cast<double>(off_s);
  else
    res.floor = static_cast<double>(res.window_primes - res.excluded);
  res.pass = res.F >= res.floor - 1e-9;
  return res;
}

// Res_{s=1} psi^(s) L(s) Y^s for L with the given polar part:
//   sum_{k=1}^{m} r_{-k}/(k-1)! d^{k-1}/ds^{k-1} [psi^(s) Y^s] at s = 1,
// the derivative expanded by Leibniz into moments and log Y powers.
inline double residue_main_term(const PolarPart& polar, const SmoothWindow& w, double Y) {
  if (Y <= 1.0) throw std::invalid_argument("residue_main_term: Y must exceed 1");
  const double logY = std::log(Y);
  const int m = polar.order();
  std::vector<double> moments(static_cast<std::size_t>(m), 0.0);
  for (int j = 0; j < m; ++j) moments[static_cast<std::size_t>(j)] = w.moment(j);

  cdouble total = 0.0;
  double k_factorial = 1.0;  // (k-1)!
  for (int k = 1; k <= m; ++k) {
    if (k > 1) k_factorial *= (k - 1);
    // d^{k-1}[psi^ Y^s] at 1 = Y sum_i C(k-1,i) psi^{(i)}(1) (log Y)^{k-1-i}
    double deriv = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= k - 1; ++i) {
      if (i > 0) binom = binom * (k - i) / i;
      deriv += binom * moments[static_cast<std::size_t>(i)] * std::pow(logY, k - 1 - i);
    }
    total += polar.r_neg(k) / k_factorial * deriv;
  }
  return (Y * total).real();
}

struct ContourError {
  double value = 0.0;
  bool extrapolated = false;  // sigma = -b lies left of the preconvexity range
  double range_lo = 0.0;      // left endpoint of the stated range
};

// slack * C^{l(-b)+eps} * Y^{-b}: the shifted-contour error scale. The
// line l is extrapolated linearly when -b is left of the stated
// preconvexity interval, and that is flagged in the result.
inline ContourError contour_error(double C, double b, double Y, double epsilon, int n, int nprime,
                                  double slack = 1.0) {
  if (b < 1.0) throw std::invalid_argument("contour_error: b must be >= 1");
  if (C < 1.0) throw std::invalid_argument("contour_error: C must be >= 1");
  const PreconvexLine line = preconvex_line(n, nprime);
  ContourError res;
  res.range_lo = line.lo();
  res.extrapolated = (-b < line.lo());
  res.value = slack * std::pow(C, line.at(-b) + epsilon) * std::pow(Y, -b);
  return res;
}

// C^{-(1/2)(1-1/d)-eps}, the polar-part lower bound with slack 1.
inline double polar_lower_bound(double spec_conductor, int d, int ell, double epsilon) {
  if (spec_conductor < 1.0) throw std::invalid_argument("polar_lower_bound: conductor must be >= 1");
  if (d < 1 || ell < 1) throw std::invalid_argument("polar_lower_bound: d and ell must be >= 1");
  const double exponent = -0.5 * (1.0 - 1.0 / static_cast<double>(d)) - epsilon;
  return std::pow(spec_conductor, exponent);
}

// The smoothed-sum length used inside the polar-part bound.
inline double polar_sum_length(double spec_conductor, double epsilon) {
  return std::pow(spec_conductor, 0.5 + epsilon);
}

}  // namespace rsedge
