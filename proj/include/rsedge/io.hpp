#pragma once

// File formats and serialization: per-prime local data as CSV
// ("p, n, re_1, im_1, ..., re_n, im_n") or JSON, dataset files that
// also carry the conductor and archimedean data, run configuration,
// and JSON forms of ledgers and verdicts. All numeric output uses the
// shortest decimal form that round-trips binary64.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsedge/conductor.hpp"
#include "rsedge/effective.hpp"
#include "rsedge/lseries.hpp"

namespace rsedge {

using json = nlohmann::json;

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Local data records
// ---------------------------------------------------------------------------

// One line per prime: p, n, re_1, im_1, ..., re_n, im_n. Blank lines
// and lines starting with '#' are skipped.
inline std::vector<LocalSatake> parse_locals_csv(const std::string& text) {
  std::vector<LocalSatake> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> fields;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::size_t pos = 0;
      fields.push_back(std::stod(cell, &pos));
    }
    if (fields.empty()) continue;
    if (fields.size() < 2) throw std::invalid_argument("locals csv: short record");
    const auto p = static_cast<std::int64_t>(fields[0]);
    const auto n = static_cast<std::size_t>(fields[1]);
    if (fields.size() != 2 + 2 * n) throw std::invalid_argument("locals csv: field count mismatch");
    std::vector<cdouble> params(n);
    for (std::size_t i = 0; i < n; ++i) params[i] = cdouble{fields[2 + 2 * i], fields[3 + 2 * i]};
    out.emplace_back(p, std::move(params));
  }
  return out;
}

inline std::string locals_to_csv(const std::vector<LocalSatake>& locals) {
  std::string out;
  for (const auto& l : locals) {
    out += std::to_string(l.prime());
    out += ',';
    out += std::to_string(l.degree());
    for (const cdouble& a : l.params()) {
      out += ',';
      out += format_double(a.real());
      out += ',';
      out += format_double(a.imag());
    }
    out += '\n';
  }
  return out;
}

// JSON array form: [[p, n, re_1, im_1, ...], ...]
inline std::vector<LocalSatake> parse_locals_json(const json& j) {
  std::vector<LocalSatake> out;
  for (const auto& rec : j) {
    if (!rec.is_array() || rec.size() < 2) throw std::invalid_argument("locals json: bad record");
    const auto p = rec[0].get<std::int64_t>();
    const auto n = rec[1].get<std::size_t>();
    if (rec.size() != 2 + 2 * n) throw std::invalid_argument("locals json: field count mismatch");
    std::vector<cdouble> params(n);
    for (std::size_t i = 0; i < n; ++i)
      params[i] = cdouble{rec[2 + 2 * i].get<double>(), rec[3 + 2 * i].get<double>()};
    out.emplace_back(p, std::move(params));
  }
  return out;
}

inline json locals_to_json(const std::vector<LocalSatake>& locals) {
  json j = json::array();
  for (const auto& l : locals) {
    json rec = json::array();
    rec.push_back(l.prime());
    rec.push_back(l.degree());
    for (const cdouble& a : l.params()) {
      rec.push_back(a.real());
      rec.push_back(a.imag());
    }
    j.push_back(std::move(rec));
  }
  return j;
}

// A standard-L dataset: degree, arithmetic conductor, archimedean
// parameters, and the per-prime local data.
struct LocalDataset {
  int degree = 1;
  std::int64_t conductor = 1;
  ArchimedeanData arch;
  std::vector<LocalSatake> locals;

  AnalyticConductor analytic() const { return AnalyticConductor(conductor, arch, degree); }
};

inline json dataset_to_json(const LocalDataset& ds) {
  json arch = json::array();
  for (const auto& place : ds.arch.places) {
    json mus = json::array();
    for (const cdouble& mu : place.mus) mus.push_back(json::array({mu.real(), mu.imag()}));
    arch.push_back(json{{"kind", place.kind == PlaceKind::real_place ? "real" : "complex"},
                        {"mus", std::move(mus)}});
  }
  return json{{"degree", ds.degree},
              {"conductor", ds.conductor},
              {"arch", std::move(arch)},
              {"locals", locals_to_json(ds.locals)}};
}

inline LocalDataset dataset_from_json(const json& j) {
  LocalDataset ds;
  ds.degree = j.at("degree").get<int>();
  ds.conductor = j.at("conductor").get<std::int64_t>();
  for (const auto& place : j.at("arch")) {
    ArchPlace p;
    p.kind = place.at("kind").get<std::string>() == "complex" ? PlaceKind::complex_place
                                                              : PlaceKind::real_place;
    for (const auto& mu : place.at("mus"))
      p.mus.push_back(cdouble{mu[0].get<double>(), mu[1].get<double>()});
    ds.arch.places.push_back(std::move(p));
  }
  ds.locals = parse_locals_json(j.at("locals"));
  return ds;
}

// Loads a dataset file: .json carries everything; .csv carries local
// records only, with degree/conductor/arch supplied by the caller.
inline LocalDataset load_dataset(const std::string& path,
                                 std::optional<std::int64_t> csv_conductor = std::nullopt,
                                 const std::vector<double>& csv_mus = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    LocalDataset ds;
    ds.locals = parse_locals_csv(text);
    if (ds.locals.empty()) throw std::invalid_argument(path + ": no local records");
    ds.degree = ds.locals.front().degree();
    ds.conductor = csv_conductor.value_or(1);
    ArchPlace place;
    place.kind = PlaceKind::real_place;
    if (csv_mus.empty())
      place.mus.assign(static_cast<std::size_t>(ds.degree), cdouble{0.0});
    else
      for (const double mu : csv_mus) place.mus.push_back(cdouble{mu, 0.0});
    ds.arch.places.push_back(std::move(place));
    return ds;
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": JSON parse error: " + e.what());
  }
  try {
    return dataset_from_json(j);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": bad dataset: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  double epsilon = 0.05;
  std::int64_t n_trunc = 1000000;
  double y_cap = 1000000.0;
  double slack = 1.0;
  double window_a = 0.5;
  double window_b = 4.0;
  std::string format = "json";  // json | csv
  std::uint64_t seed = 0;
  double stage1_tol = 1e-9;

  void validate() const {
    if (epsilon <= 0.0 || stage1_tol <= 0.0 || slack <= 0.0)
      throw std::invalid_argument("RunConfig: tolerances and slack must be positive");
    if (format != "json" && format != "csv") throw std::invalid_argument("RunConfig: bad format");
  }
};

inline json config_to_json(const RunConfig& c) {
  return json{{"epsilon", c.epsilon},   {"n_trunc", c.n_trunc},
              {"y_cap", c.y_cap},       {"slack", c.slack},
              {"window_a", c.window_a}, {"window_b", c.window_b},
              {"format", c.format},     {"seed", c.seed},
              {"stage1_tol", c.stage1_tol}};
}

inline RunConfig config_from_json(const json& j) {
  RunConfig c;
  if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<double>();
  if (j.contains("n_trunc")) c.n_trunc = j["n_trunc"].get<std::int64_t>();
  if (j.contains("y_cap")) c.y_cap = j["y_cap"].get<double>();
  if (j.contains("slack")) c.slack = j["slack"].get<double>();
  if (j.contains("window_a")) c.window_a = j["window_a"].get<double>();
  if (j.contains("window_b")) c.window_b = j["window_b"].get<double>();
  if (j.contains("format")) c.format = j["format"].get<std::string>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("stage1_tol")) c.stage1_tol = j["stage1_tol"].get<double>();
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

inline json ledger_to_json(const ExponentLedger& led) {
  return json{{"n", led.n},         {"nprime", led.nprime},
              {"degF", led.degF},   {"epsilon", led.epsilon},
              {"theta", led.theta}, {"theta_prime", led.theta_prime},
              {"A1", led.A1},       {"A2", led.A2},
              {"A3", led.A3},       {"A", led.A},
              {"Aprime", led.Aprime},
              {"B1", led.B1},       {"B2", led.B2},
              {"B3", led.B3},       {"B4", led.B4},
              {"B", led.B},         {"C", led.Cexp}};
}

inline json verdict_to_json(const DistinguishVerdict& v, const ExponentLedger& led) {
  json j{{"verdict", v.verdict == Verdict::Distinct ? "Distinct" : "Equal"},
         {"margin", v.margin},
         {"Y_used", v.Y_used},
         {"mode", v.empirical ? "empirical" : "exact"},
         {"ledger", ledger_to_json(led)}};
  if (v.witness)
    j["witness"] = *v.witness;
  else
    j["witness"] = nullptr;
  return j;
}

}  // namespace rsedge
