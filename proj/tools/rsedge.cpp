// Command-line surface for the toolkit. Every command is deterministic
// given its flags (including --seed) and prints machine-readable output:
// JSON by default, CSV where tabular. Exit codes: 0 when all internal
// checks pass, 2 when an analytic certificate is inconclusive at this
// scale, 1 for errors.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsedge/characters.hpp"
#include "rsedge/conductor.hpp"
#include "rsedge/effective.hpp"
#include "rsedge/io.hpp"
#include "rsedge/lseries.hpp"
#include "rsedge/mellin.hpp"
#include "rsedge/primes.hpp"
#include "rsedge/symmetric.hpp"

namespace {

using rsedge::cdouble;
using rsedge::json;
using rsedge::RunConfig;

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Unimodular-product draws: moduli jittered around 1, then rescaled so
// the product has modulus exactly 1 (within rounding).
std::vector<cdouble> draw_unimodular(std::mt19937_64& rng, std::size_t d) {
  std::vector<cdouble> alpha(d);
  for (auto& a : alpha)
    a = std::polar(std::exp(0.1 * (2.0 * u01(rng) - 1.0)), 2.0 * std::numbers::pi * u01(rng));
  double prod = 1.0;
  for (const auto& a : alpha) prod *= std::abs(a);
  const double fix = std::pow(prod, -1.0 / static_cast<double>(d));
  for (auto& a : alpha) a *= fix;
  return alpha;
}

void emit(const json& j, const RunConfig& cfg) {
  if (cfg.format == "csv") {
    // flat key,value table in sorted key order
    std::cout << "key,value\n";
    for (const auto& [key, value] : j.items()) {
      if (value.is_structured()) {
        for (const auto& [k2, v2] : value.items())
          std::cout << key << '.' << k2 << ',' << v2.dump() << '\n';
      } else {
        std::cout << key << ',' << value.dump() << '\n';
      }
    }
  } else {
    std::cout << j.dump(2) << '\n';
  }
}

int cmd_lemma1(int d, int trials, const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  double min_bd = std::numeric_limits<double>::infinity();
  double worst_gap = 0.0;
  int passes = 0;
  for (int t = 0; t < trials; ++t) {
    const auto alpha = draw_unimodular(rng, static_cast<std::size_t>(d));
    const auto res = rsedge::lemma1_check(alpha);
    min_bd = std::min(min_bd, res.b_d);
    worst_gap = std::max(worst_gap, std::abs(res.b_d - res.decomposition));
    if (res.pass) ++passes;
  }
  const json out{{"command", "lemma1"},
                 {"d", d},
                 {"trials", trials},
                 {"seed", cfg.seed},
                 {"min_b_d", min_bd},
                 {"pass_rate", trials > 0 ? static_cast<double>(passes) / trials : 1.0},
                 {"max_decomposition_gap", worst_gap},
                 {"pass", passes == trials}};
  emit(out, cfg);
  return passes == trials ? 0 : 1;
}

int cmd_cauchy(const std::string& alpha_spec, int K, const RunConfig& cfg) {
  std::vector<cdouble> alpha;
  std::istringstream parts(alpha_spec);
  std::string entry;
  while (std::getline(parts, entry, ';')) {
    const auto comma = entry.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("--alpha entries are re,im pairs");
    alpha.push_back(cdouble{std::stod(entry.substr(0, comma)), std::stod(entry.substr(comma + 1))});
  }
  const auto direct = rsedge::cauchy_coefficients(alpha, static_cast<std::size_t>(K));
  const auto schur = rsedge::cauchy_via_schur(alpha, static_cast<std::size_t>(K));
  double max_rel = 0.0;
  json coeffs = json::array();
  for (std::size_t k = 0; k <= static_cast<std::size_t>(K); ++k) {
    const double scale = std::max(1.0, std::abs(direct[k]));
    max_rel = std::max(max_rel, std::abs(direct[k] - schur[k]) / scale);
    coeffs.push_back(json{{"k", k},
                          {"direct_re", direct[k].real()},
                          {"direct_im", direct[k].imag()},
                          {"schur_re", schur[k].real()},
                          {"schur_im", schur[k].imag()}});
  }
  const bool pass = max_rel <= 1e-8;
  emit(json{{"command", "cauchy"},
            {"K", K},
            {"coefficients", coeffs},
            {"max_rel_diff", max_rel},
            {"pass", pass}},
       cfg);
  return pass ? 0 : 1;
}

int cmd_polar_bound(double conductor, int d, int ell, const RunConfig& cfg) {
  const double bound = rsedge::polar_lower_bound(conductor, d, ell, cfg.epsilon);
  emit(json{{"command", "polar-bound"},
            {"conductor", conductor},
            {"d", d},
            {"ell", ell},
            {"epsilon", cfg.epsilon},
            {"max_pole_order", ell * ell},
            {"lower_bound", bound},
            {"sum_length_Y", rsedge::polar_sum_length(conductor, cfg.epsilon)}},
       cfg);
  return 0;
}

int cmd_lemma2(int d, double Y, const std::vector<std::int64_t>& exclude, const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const auto N = static_cast<std::int64_t>(std::ceil(cfg.window_b * Y));
  std::vector<rsedge::LocalSatake> locals;
  for (const std::int64_t p : rsedge::primes_up_to(N)) {
    std::vector<cdouble> params;
    for (int i = 0; i < d; ++i)
      params.push_back(std::polar(1.0, 2.0 * std::numbers::pi * u01(rng)));
    locals.emplace_back(p, std::move(params));
  }
  const auto stream = rsedge::rs_self_pairing_stream(locals, N);
  const std::set<std::int64_t> S(exclude.begin(), exclude.end());
  const auto res = rsedge::lemma2_bound(stream, d, Y, S);
  emit(json{{"command", "lemma2"},
            {"d", d},
            {"Y", Y},
            {"seed", cfg.seed},
            {"F", res.F},
            {"floor", res.floor},
            {"window_primes", res.window_primes},
            {"excluded", res.excluded},
            {"pass", res.pass}},
       cfg);
  return res.pass ? 0 : 1;
}

int cmd_l1_bound(int n, int nprime, double Q, double t, const RunConfig& cfg) {
  const auto led = rsedge::build_ledger(n, nprime, cfg.epsilon);
  emit(json{{"command", "l1-bound"},
            {"Q", Q},
            {"t", t},
            {"bound", rsedge::l1_lower_bound(led, Q, t)},
            {"ledger", rsedge::ledger_to_json(led)}},
       cfg);
  return 0;
}

int cmd_zero_free(int n, int nprime, double Q, double t, double c, const RunConfig& cfg) {
  const auto led = rsedge::build_ledger(n, nprime, cfg.epsilon);
  emit(json{{"command", "zero-free"},
            {"Q", Q},
            {"t", t},
            {"c", c},
            {"width", rsedge::zero_free_width(led, Q, t, c)},
            {"ledger", rsedge::ledger_to_json(led)}},
       cfg);
  return 0;
}

int cmd_ledger(int n, int nprime, const RunConfig& cfg) {
  const auto led = rsedge::build_ledger(n, nprime, cfg.epsilon);
  json samples = json::array();
  for (const double Q : {10.0, 100.0, 1000.0})
    samples.push_back(json{{"Q", Q}, {"width", rsedge::zero_free_width(led, Q, 0.0)}});
  emit(json{{"command", "ledger"},
            {"ledger", rsedge::ledger_to_json(led)},
            {"zero_free_samples", samples}},
       cfg);
  return 0;
}

int cmd_example(std::int64_t q_max, const RunConfig& cfg) {
  const auto chars = rsedge::enumerate_real_primitive(q_max);
  if (cfg.format == "json") {
    json rows = json::array();
    for (const auto& chi : chars) {
      const auto rep = rsedge::example_pipeline(chi, cfg.epsilon);
      rows.push_back(json{{"q", rep.q},
                          {"L1", rep.L1},
                          {"L1prime", rep.L1prime},
                          {"r_minus2", rep.r_minus2},
                          {"r_minus1", rep.r_minus1},
                          {"lhs", rep.lhs},
                          {"rhs", rep.rhs},
                          {"oracle", rep.dirichlet_oracle},
                          {"slack", rep.lhs / rep.rhs}});
    }
    std::cout << json{{"command", "example"}, {"epsilon", cfg.epsilon}, {"rows", rows}}.dump(2)
              << '\n';
  } else {
    std::cout << "q,L1,L1prime,r_minus2,r_minus1,lhs,rhs,oracle,slack\n";
    for (const auto& chi : chars) {
      const auto rep = rsedge::example_pipeline(chi, cfg.epsilon);
      std::cout << rep.q << ',' << rsedge::format_double(rep.L1) << ','
                << rsedge::format_double(rep.L1prime) << ','
                << rsedge::format_double(rep.r_minus2) << ','
                << rsedge::format_double(rep.r_minus1) << ','
                << rsedge::format_double(rep.lhs) << ','
                << rsedge::format_double(rep.rhs) << ','
                << rsedge::format_double(rep.dirichlet_oracle) << ','
                << rsedge::format_double(rep.lhs / rep.rhs) << '\n';
    }
  }
  return 0;
}

int cmd_distinguish(const std::string& file_a, const std::string& file_b, const std::string& mode,
                    std::optional<double> tau, std::optional<std::int64_t> qa,
                    std::optional<std::int64_t> qb, const std::vector<double>& mua,
                    const std::vector<double>& mub, const RunConfig& cfg) {
  const auto ds_a = rsedge::load_dataset(file_a, qa, mua);
  const auto ds_b = rsedge::load_dataset(file_b, qb, mub);
  if (ds_a.degree != ds_b.degree)
    throw std::invalid_argument("distinguish: datasets have different degrees");

  const auto N_std = static_cast<std::int64_t>(std::ceil(cfg.y_cap));
  const auto stream_a = rsedge::build_stream(ds_a.locals, N_std);
  const auto stream_b = rsedge::build_stream(ds_b.locals, N_std);

  std::set<std::int64_t> S;
  for (const auto p : stream_a.ramified_primes) S.insert(p);
  for (const auto p : stream_b.ramified_primes) S.insert(p);

  const auto led = rsedge::build_ledger(ds_a.degree, ds_b.degree, cfg.epsilon);
  rsedge::DistinguishOptions opt;
  opt.stage1_tol = cfg.stage1_tol;
  opt.epsilon = cfg.epsilon;
  opt.slack = cfg.slack;

  rsedge::DistinguishVerdict verdict;
  if (mode == "approx")
    verdict = rsedge::approx_distinguish(stream_a, stream_b, ds_a.analytic(), ds_b.analytic(), S,
                                         cfg.y_cap, led, tau, opt);
  else
    verdict = rsedge::distinguish(stream_a, stream_b, ds_a.analytic(), ds_b.analytic(), S,
                                  cfg.y_cap, led, opt);
  emit(rsedge::verdict_to_json(verdict, led), cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for Rankin-Selberg lower bounds at the edge of the critical "
               "strip and effective multiplicity one"};
  app.require_subcommand(1);

  RunConfig cfg;
  if (const char* env = std::getenv("RSEDGE_CONFIG")) {
    std::ifstream in(env);
    if (in) {
      json j;
      in >> j;
      cfg = rsedge::config_from_json(j);
    }
  }

  app.add_option("--epsilon", cfg.epsilon, "epsilon in exponents");
  app.add_option("--ycap", cfg.y_cap, "cap on the scan length Y");
  app.add_option("--n-trunc", cfg.n_trunc, "stream truncation");
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--format", cfg.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--slack", cfg.slack, "multiplicative slack on bound objects");

  auto* lemma1 = app.add_subcommand("lemma1", "min b_d over random unimodular draws");
  int l1_d = 2, l1_trials = 1000;
  lemma1->add_option("--d", l1_d, "number of alpha entries")->check(CLI::Range(1, 6));
  lemma1->add_option("--trials", l1_trials, "number of draws");

  auto* cauchy = app.add_subcommand("cauchy", "Cauchy coefficients by both routes");
  std::string alpha_spec = "1,0;1,0";
  int cauchy_k = 8;
  cauchy->add_option("--alpha", alpha_spec, "semicolon-separated re,im pairs");
  cauchy->add_option("--K", cauchy_k, "truncation order")->check(CLI::Range(0, 64));

  auto* polar = app.add_subcommand("polar-bound", "polar-part lower bound");
  double pb_conductor = 100.0;
  int pb_d = 2, pb_ell = 2;
  polar->add_option("--conductor", pb_conductor, "C(Pi x Pi)");
  polar->add_option("--d", pb_d, "isobaric degree");
  polar->add_option("--ell", pb_ell, "number of isobaric components");

  auto* lemma2 = app.add_subcommand("lemma2", "smoothed-sum floor on synthetic unimodular data");
  int l2_d = 2;
  double l2_y = 10000.0;
  std::vector<std::int64_t> l2_exclude;
  lemma2->add_option("--d", l2_d, "local degree")->check(CLI::Range(1, 4));
  lemma2->add_option("--Y", l2_y, "sum length");
  lemma2->add_option("--exclude", l2_exclude, "primes excluded from the sum");

  auto* l1b = app.add_subcommand("l1-bound", "lower bound for |L(1+it)|");
  int lb_n = 1, lb_np = 1;
  double lb_q = 10.0, lb_t = 0.0;
  l1b->add_option("--n", lb_n);
  l1b->add_option("--nprime", lb_np);
  l1b->add_option("--Q", lb_q);
  l1b->add_option("--t", lb_t);

  auto* zf = app.add_subcommand("zero-free", "zero-free interval width");
  int zf_n = 1, zf_np = 1;
  double zf_q = 10.0, zf_t = 0.0, zf_c = 1.0;
  zf->add_option("--n", zf_n);
  zf->add_option("--nprime", zf_np);
  zf->add_option("--Q", zf_q);
  zf->add_option("--t", zf_t);
  zf->add_option("--c", zf_c);

  auto* ledger = app.add_subcommand("ledger", "full exponent ledger");
  int lg_n = 1, lg_np = 1;
  ledger->add_option("--n", lg_n);
  ledger->add_option("--nprime", lg_np);

  auto* example = app.add_subcommand("example", "character pipeline table");
  std::int64_t ex_qmax = 100;
  example->add_option("--qmax", ex_qmax, "largest modulus")
      ->check(CLI::Range(std::int64_t{3}, std::int64_t{10000}));

  auto* dist = app.add_subcommand("distinguish", "multiplicity-one decision for two datasets");
  std::string file_a, file_b, dist_mode = "exact";
  double dist_tau_val = -1.0;
  std::int64_t dist_qa_val = 0, dist_qb_val = 0;
  std::vector<double> dist_mua, dist_mub;
  dist->add_option("fileA", file_a, "first dataset (.json or .csv)")->required();
  dist->add_option("fileB", file_b, "second dataset (.json or .csv)")->required();
  dist->add_option("--mode", dist_mode, "exact or approx")->check(CLI::IsMember({"exact", "approx"}));
  dist->add_option("--tau", dist_tau_val, "approximate-equivalence threshold");
  dist->add_option("--qa", dist_qa_val, "conductor of fileA (csv inputs)");
  dist->add_option("--qb", dist_qb_val, "conductor of fileB (csv inputs)");
  dist->add_option("--mua", dist_mua, "archimedean mu list for fileA (csv inputs)");
  dist->add_option("--mub", dist_mub, "archimedean mu list for fileB (csv inputs)");

  for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; })) sc->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.validate();
    if (lemma1->parsed()) return cmd_lemma1(l1_d, l1_trials, cfg);
    if (cauchy->parsed()) return cmd_cauchy(alpha_spec, cauchy_k, cfg);
    if (polar->parsed()) return cmd_polar_bound(pb_conductor, pb_d, pb_ell, cfg);
    if (lemma2->parsed()) return cmd_lemma2(l2_d, l2_y, l2_exclude, cfg);
    if (l1b->parsed()) return cmd_l1_bound(lb_n, lb_np, lb_q, lb_t, cfg);
    if (zf->parsed()) return cmd_zero_free(zf_n, zf_np, zf_q, zf_t, zf_c, cfg);
    if (ledger->parsed()) return cmd_ledger(lg_n, lg_np, cfg);
    if (example->parsed()) return cmd_example(ex_qmax, cfg);
    if (dist->parsed()) {
      std::optional<double> tau;
      std::optional<std::int64_t> qa, qb;
      if (dist_tau_val >= 0.0) tau = dist_tau_val;
      if (dist_qa_val > 0) qa = dist_qa_val;
      if (dist_qb_val > 0) qb = dist_qb_val;
      return cmd_distinguish(file_a, file_b, dist_mode, tau, qa, qb, dist_mua, dist_mub, cfg);
    }
  } catch (const rsedge::inconclusive_error& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
