#pragma once

// Local Satake data over Q, multiplicative coefficient streams
// lambda(n) for n <= N, Rankin-Selberg pairing of local data, and
// error-controlled evaluation of the Dirichlet series and its
// derivatives to the right of Re(s) = 1.
//
// Ramified places carry zero Satake entries; the local factor of a
// parameter list with zeros is the product over the nonzero entries
// (an empty product is the constant 1).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <vector>

#include "rsedge/power_series.hpp"
#include "rsedge/primes.hpp"
#include "rsedge/zeta.hpp"

namespace rsedge {

// Per-prime Satake parameters; zero entries mark ramification. The
// modulus bound is N(p)^{1/2 - 1/(n^2+1)} for standard data; pairing
// routines use the looser Rankin-Selberg exponent 1 - theta - theta'.
class LocalSatake {
 public:
  LocalSatake(std::int64_t prime, std::vector<cdouble> params)
      : prime_(prime), params_(std::move(params)),
        bound_exponent_(standard_bound_exponent(static_cast<int>(params_.size()))) {
    validate();
  }

  LocalSatake(std::int64_t prime, std::vector<cdouble> params, double bound_exponent)
      : prime_(prime), params_(std::move(params)), bound_exponent_(bound_exponent) {
    validate();
  }

  static double standard_bound_exponent(int n) {
    return 0.5 - 1.0 / (static_cast<double>(n) * n + 1.0);
  }

  std::int64_t prime() const { return prime_; }
  const std::vector<cdouble>& params() const { return params_; }
  int degree() const { return static_cast<int>(params_.size()); }
  double bound_exponent() const { return bound_exponent_; }

  bool ramified() const {
    for (const cdouble& a : params_)
      if (a == cdouble{0.0}) return true;
    return false;
  }

 private:
  void validate() const {
    if (prime_ < 2) throw std::invalid_argument("LocalSatake: prime must be >= 2");
    if (params_.empty()) throw std::invalid_argument("LocalSatake: empty parameter list");
    const double bound = std::pow(static_cast<double>(prime_), bound_exponent_) + 1e-12;
    for (const cdouble& a : params_)
      if (std::abs(a) > bound)
        throw std::invalid_argument("LocalSatake: parameter violates the modulus bound");
  }

  std::int64_t prime_;
  std::vector<cdouble> params_;
  double bound_exponent_;
};

// Contragredient: conjugate every parameter (as a multiset).
inline LocalSatake contragredient(const LocalSatake& local) {
  std::vector<cdouble> conj;
  conj.reserve(local.params().size());
  for (const cdouble& a : local.params()) conj.push_back(std::conj(a));
  return LocalSatake(local.prime(), std::move(conj), local.bound_exponent());
}

// Rankin-Selberg parameters at an unramified prime: the nn' pairwise
// products a_i * b_j. Each must satisfy the exponent-form bound
// N(p)^{1 - theta - theta'}. (The source display states this bound
// without the power of N(p); the exponent form is what the standard
// bounds imply, and is what is enforced here.)
inline std::vector<cdouble> rs_local_params(const LocalSatake& a, const LocalSatake& b) {
  if (a.prime() != b.prime()) throw std::invalid_argument("rs_local_params: prime mismatch");
  if (a.ramified() || b.ramified())
    throw std::invalid_argument("rs_local_params: ramified input (supply the factor directly)");
  const double theta = 1.0 / (static_cast<double>(a.degree()) * a.degree() + 1.0);
  const double theta_p = 1.0 / (static_cast<double>(b.degree()) * b.degree() + 1.0);
  const double bound = std::pow(static_cast<double>(a.prime()), 1.0 - theta - theta_p) + 1e-12;
  std::vector<cdouble> out;
  out.reserve(a.params().size() * b.params().size());
  for (const cdouble& ai : a.params())
    for (const cdouble& bj : b.params()) {
      const cdouble prod = ai * bj;
      if (std::abs(prod) > bound)
        throw std::invalid_argument("rs_local_params: product violates the Rankin-Selberg bound");
      out.push_back(prod);
    }
  return out;
}

// Coefficients of prod_i (1 - a_i X)^{-1} up to X^K; zero entries
// contribute the factor 1, so all-zero input gives (1, 0, 0, ...).
inline PowerSeries local_factor_coefficients(const std::vector<cdouble>& params, std::size_t K) {
  PowerSeries prod = PowerSeries::one(K);
  for (const cdouble& a : params) {
    if (a == cdouble{0.0}) continue;
    prod = prod.mul(PowerSeries::geometric(a, K));
  }
  return prod;
}

// Multiplicative arithmetic function n -> lambda(n) on n <= N. Stored
// dense; streams built from local data keep a handle on that data so
// Rankin-Selberg pairings can be formed later.
struct CoefficientStream {
  std::int64_t N = 0;
  std::vector<cdouble> values;  // index n, values[0] unused
  int degree = 1;
  std::vector<std::int64_t> ramified_primes;  // sorted
  bool positivity_flag = false;
  double coeff_exponent = 0.0;  // |lambda(n)| <= d_degree(n) n^{coeff_exponent}
  std::shared_ptr<const std::vector<LocalSatake>> locals;  // provenance, optional

  cdouble at(std::int64_t n) const {
    if (n < 1 || n > N) throw std::out_of_range("CoefficientStream: index out of range");
    return values[static_cast<std::size_t>(n)];
  }
};

// lambda(n) for n <= N by multiplicative extension of the local factor
// coefficients. Every prime <= N must be covered (over Q, N(p) = p).
inline CoefficientStream build_stream(std::vector<LocalSatake> locals, std::int64_t N) {
  if (N < 1) throw std::invalid_argument("build_stream: N must be >= 1");
  std::map<std::int64_t, const LocalSatake*> by_prime;
  int degree = 0;
  for (const auto& l : locals) {
    if (!by_prime.emplace(l.prime(), &l).second)
      throw std::invalid_argument("build_stream: duplicate prime");
    degree = std::max(degree, l.degree());
  }

  CoefficientStream stream;
  stream.N = N;
  stream.degree = degree == 0 ? 1 : degree;
  stream.values.assign(static_cast<std::size_t>(N + 1), cdouble{0.0});
  stream.values[1] = 1.0;

  // lambda(p^k) tables from the local factors.
  const auto spf = spf_table(N);
  std::map<std::int64_t, std::vector<cdouble>> prime_powers;
  for (std::int64_t p = 2; p <= N; ++p) {
    if (spf[static_cast<std::size_t>(p)] != p) continue;  // not prime
    const auto it = by_prime.find(p);
    if (it == by_prime.end()) throw std::invalid_argument("build_stream: missing local data for a prime <= N");
    std::size_t K = 0;
    double pk = static_cast<double>(p);
    while (pk <= static_cast<double>(N)) {
      ++K;
      pk *= static_cast<double>(p);
    }
    const PowerSeries factor = local_factor_coefficients(it->second->params(), K);
    auto& tab = prime_powers[p];
    tab.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) tab[k] = factor[k];
    if (it->second->ramified()) stream.ramified_primes.push_back(p);
    double bexp = it->second->bound_exponent();
    stream.coeff_exponent = std::max(stream.coeff_exponent, bexp);
  }

  // Fill multiplicatively along smallest prime factors.
  for (std::int64_t n = 2; n <= N; ++n) {
    const std::int64_t p = spf[static_cast<std::size_t>(n)];
    std::int64_t m = n;
    int k = 0;
    while (m % p == 0) {
      m /= p;
      ++k;
    }
    stream.values[static_cast<std::size_t>(n)] =
        prime_powers[p][static_cast<std::size_t>(k)] * stream.values[static_cast<std::size_t>(m)];
  }

  stream.locals = std::make_shared<const std::vector<LocalSatake>>(std::move(locals));
  return stream;
}

// Rankin-Selberg stream of two standard streams' local data: pairwise
// parameter products where both primes are unramified; at ramified
// primes the factor defaults to 1 (lambda(p^k) = 0) unless an explicit
// parameter list is supplied in `ramified_overrides`.
inline CoefficientStream rs_stream(const std::vector<LocalSatake>& a,
                                   const std::vector<LocalSatake>& b, std::int64_t N,
                                   const std::map<std::int64_t, std::vector<cdouble>>& ramified_overrides = {}) {
  std::map<std::int64_t, const LocalSatake*> bmap;
  for (const auto& l : b) bmap.emplace(l.prime(), &l);
  std::vector<LocalSatake> paired;
  std::vector<std::int64_t> ramified;
  int deg = 1;
  for (const auto& la : a) {
    if (la.prime() > N) continue;
    const auto it = bmap.find(la.prime());
    if (it == bmap.end()) throw std::invalid_argument("rs_stream: prime coverage mismatch");
    const LocalSatake& lb = *it->second;
    deg = la.degree() * lb.degree();
    const double theta = 1.0 / (static_cast<double>(la.degree()) * la.degree() + 1.0);
    const double theta_p = 1.0 / (static_cast<double>(lb.degree()) * lb.degree() + 1.0);
    const double rs_exponent = 1.0 - theta - theta_p;
    if (la.ramified() || lb.ramified()) {
      ramified.push_back(la.prime());
      const auto ov = ramified_overrides.find(la.prime());
      std::vector<cdouble> params(static_cast<std::size_t>(la.degree() * lb.degree()), cdouble{0.0});
      if (ov != ramified_overrides.end()) params = ov->second;
      paired.emplace_back(la.prime(), std::move(params), rs_exponent);
    } else {
      paired.emplace_back(la.prime(), rs_local_params(la, lb), rs_exponent);
    }
  }
  CoefficientStream stream = build_stream(std::move(paired), N);
  stream.degree = deg;
  return stream;
}

// Stream of pi x pi~ type: pair local data with its own contragredient
// and mark the positivity that the Schur-square decomposition gives.
inline CoefficientStream rs_self_pairing_stream(const std::vector<LocalSatake>& a, std::int64_t N) {
  std::vector<LocalSatake> tilde;
  tilde.reserve(a.size());
  for (const auto& l : a) tilde.push_back(contragredient(l));
  CoefficientStream stream = rs_stream(a, tilde, N);
  stream.positivity_flag = true;
  return stream;
}

struct EvaluateResult {
  cdouble value{0.0};
  double tail_bound = 0.0;
  bool within_tolerance = true;
};

// Partial sum sum_{n<=N} lambda(n) (-log n)^order n^{-s} with a rigorous
// tail bound from the divisor majorant |lambda(n)| <= d_k(n) n^{sigma_max}:
//   sum_{n>N} d_k(n) (log n)^r n^{-x}
//     <= delta^{-r} N^{-delta} zeta(x - (r+1) delta)^k,  delta = (x-1)/(2(r+1)),
// using log n <= n^delta / delta and n^{-delta} <= N^{-delta} past N.
inline EvaluateResult evaluate_derivative(const CoefficientStream& stream, cdouble s, int order,
                                          double lrs_theta, double tolerance = 0.0,
                                          double min_distance = 1e-3) {
  if (order < 0 || order > 2) throw std::invalid_argument("evaluate_derivative: order must be 0, 1 or 2");
  const double sigma_max = 0.5 - lrs_theta;
  const double x = s.real() - sigma_max;
  if (x <= 1.0 + min_distance)
    throw std::domain_error("evaluate_derivative: s too close to the 1-line for a rigorous tail");

  const bool real_axis = s.imag() == 0.0;
  KahanComplexSum acc;
  for (std::int64_t n = 1; n <= stream.N; ++n) {
    const cdouble lam = stream.values[static_cast<std::size_t>(n)];
    if (lam == cdouble{0.0}) continue;
    const double lg = std::log(static_cast<double>(n));
    double logpow = 1.0;
    for (int j = 0; j < order; ++j) logpow *= -lg;
    if (real_axis)
      acc.add(lam * logpow * std::pow(static_cast<double>(n), -s.real()));
    else
      acc.add(lam * logpow * std::pow(static_cast<double>(n), -s));
  }

  EvaluateResult res;
  res.value = acc.value();
  const double delta = (x - 1.0) / (2.0 * (order + 1));
  const double zeta_arg = x - (order + 1) * delta;  // = (x+1)/2 > 1
  const double zeta_val = zeta_em_real(zeta_arg);
  res.tail_bound = std::pow(delta, -order) * std::pow(static_cast<double>(stream.N), -delta) *
                   std::pow(zeta_val, stream.degree);
  if (tolerance > 0.0) res.within_tolerance = res.tail_bound <= tolerance;
  return res;
}

inline EvaluateResult evaluate(const CoefficientStream& stream, cdouble s, double lrs_theta,
                               double tolerance = 0.0) {
  return evaluate_derivative(stream, s, 0, lrs_theta, tolerance);
}

}  // namespace rsedge
