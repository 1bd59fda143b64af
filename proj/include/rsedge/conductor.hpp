#pragma once

// Analytic conductors C(pi; t) = q * prod (1 + |it + mu|), the
// Bushnell-Henniart separation upper bound for Rankin-Selberg pairs,
// isobaric factorization over component pairs, and the preconvexity
// exponent line l(sigma) of slope -1/2.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rsedge/power_series.hpp"

namespace rsedge {

enum class PlaceKind { real_place, complex_place };

struct ArchPlace {
  PlaceKind kind = PlaceKind::real_place;
  std::vector<cdouble> mus;
};

// Archimedean parameter lists. Per place, the unitarity bound
// |Re mu| <= 1/2 - 1/(n^2+1) applies to the spectral part of mu: integer
// Gamma-shifts (0 for even and 1 for odd Dirichlet characters, and more
// generally the discrete-series shifts) are structural, so the check
// measures the distance from Re mu to the nearest nonnegative integer.
struct ArchimedeanData {
  std::vector<ArchPlace> places;

  void validate() const {
    for (const auto& place : places) {
      const double n = static_cast<double>(place.mus.size());
      const double bound = 0.5 - 1.0 / (n * n + 1.0) + 1e-12;
      for (const cdouble& mu : place.mus) {
        const double re = mu.real();
        const double spectral = std::abs(re - std::max(0.0, std::round(re)));
        if (spectral > bound)
          throw std::invalid_argument("ArchimedeanData: |Re mu| exceeds the unitarity bound");
      }
    }
  }
};

// lambda_infty(pi; t) = prod_v prod_i (1 + |it + mu_i|); always >= 1.
inline double lambda_infty(const ArchimedeanData& arch, double t) {
  double prod = 1.0;
  for (const auto& place : arch.places)
    for (const cdouble& mu : place.mus) prod *= 1.0 + std::abs(cdouble{0.0, t} + mu);
  return prod;
}

class AnalyticConductor {
 public:
  AnalyticConductor(std::int64_t q, ArchimedeanData arch, int degree)
      : q_(q), arch_(std::move(arch)), degree_(degree) {
    if (q_ < 1) throw std::invalid_argument("AnalyticConductor: q must be >= 1");
    if (degree_ < 1) throw std::invalid_argument("AnalyticConductor: degree must be >= 1");
    arch_.validate();
  }

  std::int64_t q() const { return q_; }
  const ArchimedeanData& arch() const { return arch_; }
  int degree() const { return degree_; }

  // C(pi; t) = q(pi) * lambda_infty(pi; t)
  double at(double t) const { return static_cast<double>(q_) * lambda_infty(arch_, t); }

 private:
  std::int64_t q_;
  ArchimedeanData arch_;
  int degree_;
};

inline double analytic_conductor(const AnalyticConductor& c, double t) { return c.at(t); }

// Bushnell-Henniart separation: an upper bound for C(pi x pi'; t),
//   C(pi)^{n'} C(pi'; t)^{n} (1+|t|)^{n n' degF},  degF = 1 here.
inline double rs_conductor_upper(const AnalyticConductor& ca, const AnalyticConductor& cb, double t,
                                 int deg_f = 1) {
  const double n = ca.degree(), np = cb.degree();
  return std::pow(ca.at(0.0), np) * std::pow(cb.at(t), n) *
         std::pow(1.0 + std::abs(t), n * np * deg_f);
}

struct IsobaricComponent {
  AnalyticConductor cond;
  double twist = 0.0;  // t_j in pi_j tensor |det|^{i t_j}
};

struct IsobaricSpec {
  std::vector<IsobaricComponent> components;

  int total_degree() const {
    int d = 0;
    for (const auto& c : components) d += c.cond.degree();
    return d;
  }

  // Components with identical conductor data must carry equal twists
  // (the standing normalization on repeated summands).
  void validate() const {
    for (std::size_t i = 0; i < components.size(); ++i) {
      for (std::size_t j = i + 1; j < components.size(); ++j) {
        const auto& a = components[i];
        const auto& b = components[j];
        if (a.cond.q() != b.cond.q() || a.cond.degree() != b.cond.degree()) continue;
        bool same_arch = a.cond.arch().places.size() == b.cond.arch().places.size();
        for (std::size_t k = 0; same_arch && k < a.cond.arch().places.size(); ++k)
          same_arch = a.cond.arch().places[k].mus == b.cond.arch().places[k].mus;
        if (same_arch && a.twist != b.twist)
          throw std::invalid_argument("IsobaricSpec: equal components must carry equal twists");
      }
    }
  }
};

// Optional table of exactly known pair conductors C(pi_j x pi_k),
// keyed by component indices (j, k).
using RsPairTable = std::map<std::pair<std::size_t, std::size_t>, AnalyticConductor>;

// C(Pi x Pi; t) = prod_{j,k} C(pi_j x pi_k; t + t_j + t_k).
// Pairs absent from the table fall back to the Bushnell-Henniart bound,
// so the result is an upper bound unless every pair is supplied.
inline double isobaric_rs_conductor(const IsobaricSpec& spec, double t,
                                    const RsPairTable& exact_pairs = {}) {
  if (spec.components.empty()) throw std::invalid_argument("isobaric_rs_conductor: empty spec");
  spec.validate();
  double prod = 1.0;
  for (std::size_t j = 0; j < spec.components.size(); ++j) {
    for (std::size_t k = 0; k < spec.components.size(); ++k) {
      const double shift = t + spec.components[j].twist + spec.components[k].twist;
      const auto it = exact_pairs.find({j, k});
      if (it != exact_pairs.end())
        prod *= it->second.at(shift);
      else
        prod *= rs_conductor_upper(spec.components[j].cond, spec.components[k].cond, shift);
    }
  }
  return prod;
}

// The preconvexity line l(sigma): l(-1+theta+theta') = 3/2-theta-theta',
// l(2-theta-theta') = 0. The slope is -1/2 regardless of theta, theta'.
struct PreconvexLine {
  double slope = 0.0;
  double anchor_sigma = 0.0;  // right endpoint 2-theta-theta'
  double anchor_value = 0.0;  // l at the anchor (= 0)
  double theta = 0.0;
  double theta_prime = 0.0;

  double lo() const { return -1.0 + theta + theta_prime; }
  double hi() const { return anchor_sigma; }
  double at(double sigma) const { return anchor_value + slope * (sigma - anchor_sigma); }
};

inline PreconvexLine preconvex_line(int n, int nprime) {
  if (n < 1 || nprime < 1) throw std::invalid_argument("preconvex_line: degrees must be >= 1");
  PreconvexLine line;
  line.theta = 1.0 / (static_cast<double>(n) * n + 1.0);
  line.theta_prime = 1.0 / (static_cast<double>(nprime) * nprime + 1.0);
  const double lo = -1.0 + line.theta + line.theta_prime;
  const double hi = 2.0 - line.theta - line.theta_prime;
  const double value_lo = 1.5 - line.theta - line.theta_prime;
  line.slope = (0.0 - value_lo) / (hi - lo);
  line.anchor_sigma = hi;
  line.anchor_value = 0.0;
  return line;
}

// L(sigma+it) << C^{l(sigma)+eps} inside the preconvexity interval;
// the implied constant is carried separately as a slack parameter.
inline double preconvex_bound(double sigma, double C, double epsilon, int n, int nprime) {
  if (C < 1.0) throw std::invalid_argument("preconvex_bound: C must be >= 1");
  const PreconvexLine line = preconvex_line(n, nprime);
  if (sigma < line.lo() - 1e-12 || sigma > line.hi() + 1e-12)
    throw std::domain_error("preconvex_bound: sigma outside the preconvexity interval");
  return std::pow(C, line.at(sigma) + epsilon);
}

}  // namespace rsedge
