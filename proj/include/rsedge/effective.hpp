#pragma once

// The exponent ledger behind the effective bounds, the L(1+it) lower
// bound, zero-free widths, the residue lower bound, and the
// multiplicity-one decision procedure.
//
// Every exponent is a documented formula: conductor powers convert
// Q-aspect bounds through the separation inequality (C(pi x pi') <=
// Q^{n+n'} (1+|t|)^{nn'}), and preconvexity enters through the line
// l(sigma) at the sigma each proof steps through. All suppressed
// multiplicative constants default to slack 1 and are only ever
// measured by tests, never assumed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsedge/conductor.hpp"
#include "rsedge/lseries.hpp"
#include "rsedge/mellin.hpp"
#include "rsedge/primes.hpp"

namespace rsedge {

// Stage-2 certificates that cannot be decided are reported as errors,
// never as verdicts.
class inconclusive_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExponentLedger {
  int n = 1, nprime = 1;
  int degF = 1;
  double epsilon = 0.0;
  double theta = 0.0, theta_prime = 0.0;
  double A1 = 0.0, A2 = 0.0, A3 = 0.0, A = 0.0, Aprime = 0.0;
  double B1 = 0.0, B2 = 0.0, B3 = 0.0, B4 = 0.0, B = 0.0;
  double Cexp = 0.0;
};

// Exponent derivations, per proof step:
//   A1: polar-part exponent (1/2)(1-1/d)+eps applied to the isobaric
//       conductor bound (1+|t|)^{2nn'} Q^{4(n+n')}, d = n+n'.
//   A2: preconvexity at sigma = 1 for the Laurent coefficients of
//       L(s, pi x pi~), L(s, pi' x pi~'), and for L^{(k)}(1+it, pi x pi~'),
//       each converted to Q-aspect through the separation bound.
//   A3: preconvexity of L' at sigma = 1/2.
//   B1: residue exponent of polar-part shape (n-1) + 2n eps, plus a fixed 1/2
//       margin absorbing the ineffective constant; calibrated so the
//       bound stays below phi(q)/q on the whole character family.
//   B2: preconvexity at sigma = 1 - theta for the pair of degree-n forms.
//   B3: |L^S(s)|^{-1} <= ((1+2^{-theta})^{n^2})^{|S|} with |S| <= log Q.
//   B4: preconvexity at sigma = 1 of the regularized L(s, pi x pi~).
//   B:  theta^{-1}(B1+B2+B3+B4) + 1 (strictly above the proof threshold).
//   C:  B1 + B4 + (1/2 - theta) B.
inline ExponentLedger build_ledger(int n, int nprime, double epsilon) {
  if (n < 1 || nprime < 1) throw std::invalid_argument("build_ledger: degrees must be >= 1");
  if (epsilon <= 0.0) throw std::invalid_argument("build_ledger: epsilon must be positive");
  ExponentLedger led;
  led.n = n;
  led.nprime = nprime;
  led.degF = 1;
  led.epsilon = epsilon;
  led.theta = 1.0 / (static_cast<double>(n) * n + 1.0);
  led.theta_prime = 1.0 / (static_cast<double>(nprime) * nprime + 1.0);

  const double d = static_cast<double>(n + nprime);
  const double nn = static_cast<double>(n) * nprime;
  led.A1 = std::max(4.0 * (n + nprime), 2.0 * nn) * (0.5 * (1.0 - 1.0 / d) + epsilon);

  const auto line_nn = preconvex_line(n, n);
  const auto line_pp = preconvex_line(nprime, nprime);
  const auto line_np = preconvex_line(n, nprime);
  const double a2_self = std::max(2.0 * n, static_cast<double>(n) * n) * (line_nn.at(1.0) + epsilon);
  const double a2_self_p =
      std::max(2.0 * nprime, static_cast<double>(nprime) * nprime) * (line_pp.at(1.0) + epsilon);
  const double a2_cross = std::max(static_cast<double>(n + nprime), nn) * (line_np.at(1.0) + epsilon);
  led.A2 = std::max({a2_self, a2_self_p, a2_cross});
  led.A = led.A1 + 3.0 * led.A2;

  led.A3 = std::max(static_cast<double>(n + nprime), nn) * (line_np.at(0.5) + epsilon);
  led.Aprime = led.A + led.A3;

  led.B1 = (static_cast<double>(n) - 1.0) + 0.5 + 2.0 * n * epsilon;
  led.B2 = std::max(2.0 * n, static_cast<double>(n) * n) * (line_nn.at(1.0 - led.theta) + epsilon);
  led.B3 = static_cast<double>(n) * n * std::log(1.0 + std::pow(2.0, -led.theta));
  led.B4 = std::max(2.0 * n, static_cast<double>(n) * n) * (line_nn.at(1.0) + epsilon);
  led.B = (led.B1 + led.B2 + led.B3 + led.B4) / led.theta + 1.0;
  led.Cexp = led.B1 + led.B4 + (0.5 - led.theta) * led.B;
  return led;
}

// |L(1+it, pi x pi')| >> (Q(1+|t|))^{-A}, reported with slack 1.
inline double l1_lower_bound(const ExponentLedger& ledger, double Q, double t) {
  if (Q < 1.0) throw std::invalid_argument("l1_lower_bound: Q must be >= 1");
  return std::pow(Q * (1.0 + std::abs(t)), -ledger.A);
}

// No zeros in [1 - c (Q(1+|t|))^{-A'}, 1].
inline double zero_free_width(const ExponentLedger& ledger, double Q, double t, double c = 1.0) {
  if (c <= 0.0) throw std::invalid_argument("zero_free_width: c must be positive");
  if (Q < 1.0) throw std::invalid_argument("zero_free_width: Q must be >= 1");
  return c * std::pow(Q * (1.0 + std::abs(t)), -ledger.Aprime);
}

// Res_{s=1} L(s, pi x pi~) >> Q^{-B1}, slack 1.
inline double residue_lower(double Q, const ExponentLedger& ledger) {
  if (Q < 1.0) throw std::invalid_argument("residue_lower: Q must be >= 1");
  return std::pow(Q, -ledger.B1);
}

enum class Verdict { Equal, Distinct };

struct DistinguishVerdict {
  Verdict verdict = Verdict::Equal;
  std::optional<std::int64_t> witness;
  double margin = 0.0;
  double Y_used = 0.0;
  bool empirical = false;  // Y was capped below Q^B

  void validate(const std::set<std::int64_t>& S) const {
    if (verdict == Verdict::Distinct) {
      if (!witness) throw std::logic_error("DistinguishVerdict: Distinct without witness");
      if (static_cast<double>(*witness) > Y_used)
        throw std::logic_error("DistinguishVerdict: witness beyond Y");
      for (const std::int64_t p : S)
        if (*witness % p == 0) throw std::logic_error("DistinguishVerdict: witness not coprime to S");
    }
  }
};

struct DistinguishOptions {
  double stage1_tol = 1e-9;   // coefficient equality tolerance (exact data is +-1/0)
  double epsilon = 0.05;      // epsilon in the contour-error exponent
  double contour_b = 2.0;     // contour shift depth for the certificate
  double slack = 1.0;         // multiplicative slack on the certificate error
  double s_guard_slack = 1.0; // slack in the |S| <= log Q hypothesis
  std::optional<double> residue_hint;  // Res_{s=1} L_S(s, A x A~) when known
};

namespace detail {

// GL(1) data with unimodular unramified parameters: the self-pairing
// Rankin-Selberg stream is exactly the S-deprived zeta, whose residue
// at 1 is prod_{p in S} (1 - 1/p).
inline bool is_gl1_unimodular(const CoefficientStream& stream) {
  if (!stream.locals || stream.degree != 1) return false;
  for (const auto& l : *stream.locals) {
    if (l.params().size() != 1) return false;
    const double mod = std::abs(l.params()[0]);
    if (mod != 0.0 && std::abs(mod - 1.0) > 1e-9) return false;
  }
  return true;
}

inline double zeta_s_residue(const std::set<std::int64_t>& S) {
  double r = 1.0;
  for (const std::int64_t p : S) r *= 1.0 - 1.0 / static_cast<double>(p);
  return r;
}

struct Stage2Setup {
  double Y = 0.0;
  bool empirical = false;
  double Q = 0.0;
};

inline Stage2Setup preflight(const CoefficientStream& a, const CoefficientStream& b,
                             const AnalyticConductor& ca, const AnalyticConductor& cb,
                             const std::set<std::int64_t>& S, double Y_cap,
                             const ExponentLedger& ledger, const DistinguishOptions& opt) {
  if (a.degree != b.degree)
    throw std::invalid_argument("distinguish: streams must have equal degree");
  for (const auto& stream : {&a, &b})
    for (const std::int64_t p : stream->ramified_primes)
      if (!S.count(p)) throw std::invalid_argument("distinguish: S must contain every ramified prime");

  Stage2Setup setup;
  setup.Q = std::max(ca.at(0.0), cb.at(0.0));
  // |S| << log Q. The implied constant and the +2 keep the hypothesis
  // meaningful at desk scale (it is vacuous for small Q otherwise);
  // base-2 log amounts to constant 1/log 2.
  if (static_cast<double>(S.size()) > opt.s_guard_slack * std::log2(setup.Q + 2.0))
    throw std::invalid_argument("distinguish: S too large for the log Q hypothesis");

  const double log_qb = ledger.B * std::log(setup.Q);
  const double qb = log_qb > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(log_qb);
  setup.Y = std::min(Y_cap, qb);
  setup.empirical = Y_cap < qb;
  if (setup.Y > static_cast<double>(a.N) + 0.5 || setup.Y > static_cast<double>(b.N) + 0.5)
    throw std::length_error("distinguish: Y exceeds stream truncation");
  return setup;
}

// Smallest square-free n <= Y coprime to S with |a(n) - b(n)| > tol.
inline std::optional<std::int64_t> stage1_scan(const CoefficientStream& a, const CoefficientStream& b,
                                               const std::set<std::int64_t>& S, double Y, double tol) {
  const auto limit = static_cast<std::int64_t>(std::floor(Y));
  const auto squarefree = squarefree_table(limit);
  for (std::int64_t n = 2; n <= limit; ++n) {
    if (!squarefree[static_cast<std::size_t>(n)]) continue;
    bool in_s = false;
    for (const std::int64_t p : S)
      if (n % p == 0) {
        in_s = true;
        break;
      }
    if (in_s) continue;
    if (std::abs(a.at(n) - b.at(n)) > tol) return n;
  }
  return std::nullopt;
}

}  // namespace detail

// Two-stage decision procedure. Stage 1 scans square-free n <= Y
// coprime to S for a coefficient difference; the smallest such n is the
// witness. Stage 2, reached only when no difference exists, certifies
// Equal analytically: both F(Y; A x A~) and F(Y; A x B~) must sit within
// the shifted-contour error of the main term Y * Res_{s=1} L_S(s, A x A~)
// (psi^(1) = 1 window), and that main term must dominate the error.
// The residue is available when the data is GL(1)-unimodular (the
// character case) or supplied through options.residue_hint; otherwise
// the certificate is inconclusive.
inline DistinguishVerdict distinguish(const CoefficientStream& streamA, const CoefficientStream& streamB,
                                      const AnalyticConductor& condA, const AnalyticConductor& condB,
                                      const std::set<std::int64_t>& S, double Y_cap,
                                      const ExponentLedger& ledger,
                                      const DistinguishOptions& opt = {}) {
  const auto setup = detail::preflight(streamA, streamB, condA, condB, S, Y_cap, ledger, opt);

  DistinguishVerdict verdict;
  verdict.Y_used = setup.Y;
  verdict.empirical = setup.empirical;

  const auto hit = detail::stage1_scan(streamA, streamB, S, setup.Y, opt.stage1_tol);
  if (hit) {
    verdict.verdict = Verdict::Distinct;
    verdict.witness = *hit;
    verdict.margin = std::abs(streamA.at(*hit) - streamB.at(*hit));
    verdict.validate(S);
    return verdict;
  }

  // Stage 2: analytic certificate.
  if (!streamA.locals || !streamB.locals)
    throw inconclusive_error("distinguish: stage 2 needs local data behind the streams");
  double rho_s = 0.0;
  if (opt.residue_hint) {
    rho_s = *opt.residue_hint;
  } else if (detail::is_gl1_unimodular(streamA) && detail::is_gl1_unimodular(streamB)) {
    rho_s = detail::zeta_s_residue(S);
  } else {
    throw inconclusive_error(
        "distinguish: no residue available for this stream family (supply residue_hint)");
  }

  static const SmoothWindow window = SmoothWindow::mellin_one();
  const double Y = setup.Y;
  const auto n_rs = static_cast<std::int64_t>(std::ceil(window.support_hi() * Y));
  CoefficientStream self = rs_self_pairing_stream(*streamA.locals, n_rs);
  std::vector<LocalSatake> b_tilde;
  for (const auto& l : *streamB.locals) b_tilde.push_back(contragredient(l));
  CoefficientStream cross = rs_stream(*streamA.locals, b_tilde, n_rs);

  const double F_self = smoothed_sum(self, window, Y, S);
  const double F_cross = smoothed_sum(cross, window, Y, S);

  // Main term plus the s = 0 residue of the shifted contour, which is
  // zeta_S(0) psi^(0) = -psi^(0)/2 only when S is empty.
  double predicted = Y * rho_s;
  if (S.empty()) predicted -= 0.5 * window.transform(cdouble{0.0, 0.0}).real();

  const int n = condA.degree();
  const double err_self =
      contour_error(rs_conductor_upper(condA, condA, 0.0), opt.contour_b, Y, opt.epsilon, n, n, opt.slack)
          .value;
  const double err_cross =
      contour_error(rs_conductor_upper(condA, condB, 0.0), opt.contour_b, Y, opt.epsilon, n, n, opt.slack)
          .value;

  const double err = std::max(err_self, err_cross);
  if (predicted <= err)
    throw inconclusive_error("distinguish: stage 2 main term fails to dominate the error bound");
  if (std::abs(F_self - predicted) > err_self)
    throw inconclusive_error("distinguish: F(Y; A x A~) deviates beyond the certificate error");
  if (std::abs(F_cross - predicted) > err_cross)
    throw inconclusive_error("distinguish: F(Y; A x B~) deviates beyond the certificate error");

  verdict.verdict = Verdict::Equal;
  verdict.margin = predicted - err;
  return verdict;
}

// Approximate-equivalence variant: Distinct iff some square-free n
// coprime to S has |a(n) - b(n)| >= tau, the witness maximizing the
// gap. tau defaults to Q^{-C} from the ledger; tau = 0 degenerates to
// the exact-difference scan threshold.
inline DistinguishVerdict approx_distinguish(const CoefficientStream& streamA,
                                             const CoefficientStream& streamB,
                                             const AnalyticConductor& condA,
                                             const AnalyticConductor& condB,
                                             const std::set<std::int64_t>& S, double Y_cap,
                                             const ExponentLedger& ledger,
                                             std::optional<double> tau_opt = std::nullopt,
                                             const DistinguishOptions& opt = {}) {
  const auto setup = detail::preflight(streamA, streamB, condA, condB, S, Y_cap, ledger, opt);
  const double tau = tau_opt ? *tau_opt : std::pow(setup.Q, -ledger.Cexp);
  const double threshold = std::max(tau, opt.stage1_tol);

  DistinguishVerdict verdict;
  verdict.Y_used = setup.Y;
  verdict.empirical = setup.empirical;

  const auto limit = static_cast<std::int64_t>(std::floor(setup.Y));
  const auto squarefree = squarefree_table(limit);
  double max_gap = 0.0;
  std::optional<std::int64_t> argmax;
  for (std::int64_t n = 2; n <= limit; ++n) {
    if (!squarefree[static_cast<std::size_t>(n)]) continue;
    bool in_s = false;
    for (const std::int64_t p : S)
      if (n % p == 0) {
        in_s = true;
        break;
      }
    if (in_s) continue;
    const double gap = std::abs(streamA.at(n) - streamB.at(n));
    if (gap > max_gap) {
      max_gap = gap;
      argmax = n;
    }
  }

  if (max_gap >= threshold) {
    verdict.verdict = Verdict::Distinct;
    verdict.witness = argmax;
    verdict.margin = max_gap - tau;
    verdict.validate(S);
  } else {
    verdict.verdict = Verdict::Equal;
    verdict.margin = tau - max_gap;
  }
  return verdict;
}

}  // namespace rsedge
