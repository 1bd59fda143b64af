#pragma once

// Real primitive Dirichlet characters through the Kronecker symbol
// (D|.) for fundamental discriminants D, values of L(1,chi) and
// L'(1,chi), and the polar part of [zeta(s) L(s,chi)]^2 at s = 1 both
// by the closed formulas and by an independent numerical Laurent fit.
//
// L-values are computed by splitting off a direct partial sum and
// treating the tail per residue class with Euler-Maclaurin; the
// divergent antiderivative pieces cancel through sum_a chi(a) = 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rsedge/conductor.hpp"
#include "rsedge/polar.hpp"
#include "rsedge/zeta.hpp"

namespace rsedge {

// Jacobi symbol (a|n) for odd positive n.
inline int jacobi_symbol(std::int64_t a, std::int64_t n) {
  a %= n;
  if (a < 0) a += n;
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

// Full Kronecker symbol (a|n).
inline int kronecker_symbol(std::int64_t a, std::int64_t n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  if (a % 2 == 0 && n % 2 == 0) return 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  int twos = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++twos;
  }
  if (twos % 2 == 1) {
    const std::int64_t am8 = ((a % 8) + 8) % 8;
    if (am8 == 3 || am8 == 5) result = -result;
  }
  return result * jacobi_symbol(a, n);
}

inline bool is_squarefree_small(std::int64_t m) {
  m = std::abs(m);
  for (std::int64_t p = 2; p * p <= m; ++p)
    if (m % (p * p) == 0) return false;
  return true;
}

// Fundamental discriminant: D = 1 is excluded (trivial character).
inline bool is_fundamental_discriminant(std::int64_t D) {
  if (D == 0 || D == 1) return false;
  const std::int64_t mod4 = ((D % 4) + 4) % 4;
  if (mod4 == 1) return is_squarefree_small(D);
  if (mod4 == 0) {
    const std::int64_t m = D / 4;
    const std::int64_t m4 = ((m % 4) + 4) % 4;
    return (m4 == 2 || m4 == 3) && is_squarefree_small(m);
  }
  return false;
}

enum class Parity { even, odd };

class DirichletCharacter {
 public:
  // Character (D|.) of modulus |D| for a fundamental discriminant D.
  // D = 1 builds the trivial character mod 1 (test hook; not primitive
  // in the enumeration sense but accepted by the Laurent-fit oracle).
  explicit DirichletCharacter(std::int64_t D) : D_(D), q_(std::abs(D)) {
    if (D == 0) throw std::invalid_argument("DirichletCharacter: D must be nonzero");
    if (D != 1 && !is_fundamental_discriminant(D))
      throw std::invalid_argument("DirichletCharacter: D is not a fundamental discriminant");
    values_.resize(static_cast<std::size_t>(q_));
    for (std::int64_t a = 0; a < q_; ++a)
      values_[static_cast<std::size_t>(a)] = static_cast<std::int8_t>(kronecker_symbol(D_, a));
    parity_ = (D_ < 0) ? Parity::odd : Parity::even;
    primitive_ = (conductor() == q_);
  }

  std::int64_t discriminant() const { return D_; }
  std::int64_t modulus() const { return q_; }
  Parity parity() const { return parity_; }
  bool is_primitive() const { return primitive_; }
  bool is_trivial() const { return D_ == 1; }

  int operator()(std::int64_t n) const {
    const std::int64_t r = ((n % q_) + q_) % q_;
    return values_[static_cast<std::size_t>(r)];
  }

  // Smallest f | q such that the character is induced from modulus f.
  std::int64_t conductor() const {
    for (std::int64_t f = 1; f <= q_; ++f) {
      if (q_ % f != 0) continue;
      bool induced = true;
      for (std::int64_t a = 1 + f; a <= q_ && induced; a += f) {
        if (std::gcd(a, q_) != 1) continue;
        if ((*this)(a) != 1) induced = false;
      }
      if (induced) return f;
    }
    return q_;
  }

  // mu = 0 for even characters, 1 for odd (the Gamma_R shift).
  AnalyticConductor analytic() const {
    ArchPlace place;
    place.kind = PlaceKind::real_place;
    place.mus = {cdouble{parity_ == Parity::odd ? 1.0 : 0.0, 0.0}};
    return AnalyticConductor(q_, ArchimedeanData{{place}}, 1);
  }

 private:
  std::int64_t D_;
  std::int64_t q_;
  std::vector<std::int8_t> values_;
  Parity parity_;
  bool primitive_ = false;
};

// All Kronecker characters of fundamental discriminant |D| <= q_max,
// ordered by (modulus, D). Every output is verified primitive.
inline std::vector<DirichletCharacter> enumerate_real_primitive(std::int64_t q_max) {
  if (q_max < 3) throw std::invalid_argument("enumerate_real_primitive: q_max must be >= 3");
  std::vector<DirichletCharacter> out;
  for (std::int64_t a = 3; a <= q_max; ++a) {
    for (const std::int64_t D : {-a, a}) {
      if (!is_fundamental_discriminant(D)) continue;
      DirichletCharacter chi(D);
      if (!chi.is_primitive())
        throw std::logic_error("enumerate_real_primitive: enumerated character failed primitivity");
      out.push_back(std::move(chi));
    }
  }
  return out;
}

namespace detail {

// Derivatives of f(x) = log^k(x) / x^m as coefficient vectors over
// log-powers: coeffs[i] multiplies log^i(x) / x^{denom_power}.
struct LogPolyOverX {
  std::vector<double> coeffs;
  int denom_power = 1;

  double eval(double x) const {
    const double lg = std::log(x);
    double poly = 0.0, lp = 1.0;
    for (const double c : coeffs) {
      poly += c * lp;
      lp *= lg;
    }
    return poly / std::pow(x, denom_power);
  }

  LogPolyOverX derivative() const {
    LogPolyOverX d;
    d.denom_power = denom_power + 1;
    d.coeffs.assign(coeffs.size(), 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (i + 1 < coeffs.size()) d.coeffs[i] += (static_cast<double>(i) + 1.0) * coeffs[i + 1];
      d.coeffs[i] -= static_cast<double>(denom_power) * coeffs[i];
    }
    return d;
  }
};

}  // namespace detail

// L^{(order)}(1, chi) = sum chi(n) (-log n)^order / n for a nontrivial
// primitive character; absolute error well under 1e-8 for q <= 1e4.
inline double l_one(const DirichletCharacter& chi, int order) {
  if (chi.is_trivial()) throw std::invalid_argument("l_one: trivial character has a pole at s = 1");
  if (order < 0 || order > 1) throw std::invalid_argument("l_one: order must be 0 or 1");
  const std::int64_t q = chi.modulus();
  const std::int64_t J = std::max<std::int64_t>(64, (100000 + q - 1) / q);
  const std::int64_t N = J * q;

  // Direct block n <= N.
  KahanSum direct;
  for (std::int64_t n = 1; n <= N; ++n) {
    const int v = chi(n);
    if (v == 0) continue;
    const double lg = std::log(static_cast<double>(n));
    direct.add(v * (order == 0 ? 1.0 : -lg) / static_cast<double>(n));
  }

  // Tail per residue class r: sum_{j>=J} f(jq+r) with f = log^k/x by
  // Euler-Maclaurin; the antiderivative log^{k+1}/(k+1) pieces cancel
  // across r because sum_r chi(r) = 0.
  detail::LogPolyOverX f;
  f.coeffs.assign(static_cast<std::size_t>(order) + 1, 0.0);
  f.coeffs[static_cast<std::size_t>(order)] = 1.0;
  const auto f1 = f.derivative();
  const auto f3 = f1.derivative().derivative();
  const auto f5 = f3.derivative().derivative();
  const double qd = static_cast<double>(q);

  KahanSum tail;
  for (std::int64_t r = 1; r <= q; ++r) {
    const int v = chi(r);
    if (v == 0) continue;
    const double x = static_cast<double>(N + r);
    const double lg = std::log(x);
    const double antider = std::pow(lg, order + 1) / (order + 1.0);
    double term = -antider / qd;
    term += 0.5 * f.eval(x);
    term -= (1.0 / 12.0) * qd * f1.eval(x);
    term += (1.0 / 720.0) * qd * qd * qd * f3.eval(x);
    term -= (1.0 / 30240.0) * std::pow(qd, 5) * f5.eval(x);
    tail.add(v * term);
  }

  const double sign = (order == 0) ? 1.0 : -1.0;
  return direct.value() + sign * tail.value();
}

// L(s, chi) for real s in (0, 3], s != 1, by the same residue-class
// Euler-Maclaurin scheme with f(x) = x^{-s}; valid on both sides of 1
// (this is the continuation, not the raw series). Trivial D = 1 gives
// zeta(s).
inline double dirichlet_l_em(const DirichletCharacter& chi, double s) {
  if (s <= 0.0 || s > 3.0) throw std::invalid_argument("dirichlet_l_em: s out of the supported range");
  if (chi.is_trivial()) {
    return zeta_em_real(s);
  }
  if (s == 1.0) return l_one(chi, 0);
  const std::int64_t q = chi.modulus();
  const std::int64_t J = std::max<std::int64_t>(64, (100000 + q - 1) / q);
  const std::int64_t N = J * q;

  KahanSum direct;
  for (std::int64_t n = 1; n <= N; ++n) {
    const int v = chi(n);
    if (v == 0) continue;
    direct.add(v * std::pow(static_cast<double>(n), -s));
  }

  // f^{(m)}(x) = (-1)^m s(s+1)...(s+m-1) x^{-s-m}
  const double c1 = -s;
  const double c3 = -s * (s + 1.0) * (s + 2.0);
  const double c5 = c3 * (s + 3.0) * (s + 4.0);
  const double qd = static_cast<double>(q);

  KahanSum tail;
  for (std::int64_t r = 1; r <= q; ++r) {
    const int v = chi(r);
    if (v == 0) continue;
    const double x = static_cast<double>(N + r);
    const double antider = std::pow(x, 1.0 - s) / (1.0 - s);
    double term = -antider / qd;
    term += 0.5 * std::pow(x, -s);
    term -= (1.0 / 12.0) * qd * c1 * std::pow(x, -s - 1.0);
    term += (1.0 / 720.0) * qd * qd * qd * c3 * std::pow(x, -s - 3.0);
    term -= (1.0 / 30240.0) * std::pow(qd, 5) * c5 * std::pow(x, -s - 5.0);
    tail.add(v * term);
  }
  return direct.value() + tail.value();
}

struct ExampleReport {
  std::int64_t q = 0;
  double L1 = 0.0;
  double L1prime = 0.0;
  double r_minus2 = 0.0;
  double r_minus1 = 0.0;
  double lhs = 0.0;  // |r_{-1}| + |r_{-2}|
  double rhs = 0.0;  // C(Pi x Pi)^{-1/4 - eps}
  double dirichlet_oracle = 0.0;  // q^{-1/2}
  double conductor = 0.0;         // C(Pi x Pi) with exact pair conductors
};

// Exact pair-conductor table for Pi = chi boxplus 1: the pairs are
// chi*chi = trivial (conductor 1), chi*1 = chi, 1*1 = zeta.
inline RsPairTable chi_boxplus_one_pairs(const DirichletCharacter& chi) {
  ArchPlace zero_place{PlaceKind::real_place, {cdouble{0.0, 0.0}}};
  const AnalyticConductor trivial(1, ArchimedeanData{{zero_place}}, 1);
  const AnalyticConductor chi_cond = chi.analytic();
  RsPairTable table;
  table.emplace(std::make_pair(std::size_t{0}, std::size_t{0}), trivial);
  table.emplace(std::make_pair(std::size_t{0}, std::size_t{1}), chi_cond);
  table.emplace(std::make_pair(std::size_t{1}, std::size_t{0}), chi_cond);
  table.emplace(std::make_pair(std::size_t{1}, std::size_t{1}), trivial);
  return table;
}

inline IsobaricSpec chi_boxplus_one_spec(const DirichletCharacter& chi) {
  ArchPlace zero_place{PlaceKind::real_place, {cdouble{0.0, 0.0}}};
  IsobaricSpec spec;
  spec.components.push_back({chi.analytic(), 0.0});
  spec.components.push_back({AnalyticConductor(1, ArchimedeanData{{zero_place}}, 1), 0.0});
  return spec;
}

// For Pi = chi boxplus 1, L(s, Pi x Pi~) = [zeta(s) L(s,chi)]^2 has a
// double pole at s = 1 with
//   r_{-2} = L(1,chi)^2,
//   r_{-1} = 2 L'(1,chi) L(1,chi) + 2 gamma L(1,chi)^2,
// gamma being the Euler-Mascheroni constant (the constant Laurent
// coefficient of zeta at s = 1).
inline ExampleReport example_pipeline(const DirichletCharacter& chi, double epsilon) {
  if (!chi.is_primitive() || chi.is_trivial())
    throw std::invalid_argument("example_pipeline: needs a nontrivial real primitive character");
  ExampleReport rep;
  rep.q = chi.modulus();
  rep.L1 = l_one(chi, 0);
  rep.L1prime = l_one(chi, 1);
  const double gamma = std::numbers::egamma;
  rep.r_minus2 = rep.L1 * rep.L1;
  rep.r_minus1 = 2.0 * rep.L1prime * rep.L1 + 2.0 * gamma * rep.L1 * rep.L1;
  rep.lhs = std::abs(rep.r_minus1) + std::abs(rep.r_minus2);
  rep.conductor = isobaric_rs_conductor(chi_boxplus_one_spec(chi), 0.0, chi_boxplus_one_pairs(chi));
  rep.rhs = std::pow(rep.conductor, -0.25 - epsilon);
  rep.dirichlet_oracle = 1.0 / std::sqrt(static_cast<double>(rep.q));
  if (!(rep.lhs > 0.0)) throw std::logic_error("example_pipeline: polar part vanished");
  return rep;
}

// Independent oracle: fit r_{-2}, r_{-1} of [zeta(s) L(s,chi)]^2 from
// values at s = 1 + h, h in {+-1e-2, +-1e-3}, Richardson-extrapolating
// the even and odd parts of h^2 G(1+h).
inline PolarPart rs_polar_oracle(const DirichletCharacter& chi) {
  // Trivial-character hook fits zeta(s)^2 itself (r_{-2} = 1, r_{-1} = 2 gamma).
  const auto G = [&](double h) {
    const double z = zeta_em_real(1.0 + h);
    if (chi.is_trivial()) return z * z;
    const double l = dirichlet_l_em(chi, 1.0 + h);
    return z * l * z * l;
  };
  const double h1 = 1e-2, h2 = 1e-3;
  const auto g = [&](double h) { return G(h) * h * h; };
  const auto even = [&](double h) { return 0.5 * (g(h) + g(-h)); };
  const auto odd = [&](double h) { return (g(h) - g(-h)) / (2.0 * h); };
  const double w = (h1 * h1) / (h1 * h1 - h2 * h2);
  const double r2 = w * even(h2) + (1.0 - w) * even(h1);
  const double r1 = w * odd(h2) + (1.0 - w) * odd(h1);
  if (!std::isfinite(r2) || !std::isfinite(r1))
    throw std::runtime_error("rs_polar_oracle: fit conditioning failure");
  return PolarPart({cdouble{r1, 0.0}, cdouble{r2, 0.0}});
}

}  // namespace rsedge
