#pragma once

// Experiment configuration, the seeded test-field family, report rows and
// deterministic CSV emission shared by every runner and the CLI.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "heis/grid.hpp"
#include "heis/riesz.hpp"
#include "heis/spectral.hpp"

namespace heis {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct SpectralConfig {
  int K = 32;
  double lambda_min = 0.05;
  double lambda_max = 8.0;
  int nodes = 48;

  SpectralGrid make(int n) const {
    return SpectralGrid::make_gauss_legendre(n, K, lambda_min, lambda_max, nodes);
  }
};

struct ExperimentConfig {
  GridSpec grid{1, 6.0, 6.0, 32, 32};
  SpectralConfig spectral;
  RieszParams riesz;
  MaximalGrid maximal;
  std::map<std::string, std::vector<double>> sweep;
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 20240501;
  std::string output_path = "report.csv";
  double memory_cap_mb = 4096.0;
  nlohmann::json overrides;  // per-runner sections, e.g. overrides["plancherel"]

  static ExperimentConfig defaults() {
    ExperimentConfig c;
    c.sweep["delta"] = {0.25, 0.125, 0.0625, 0.03125, 0.015625};
    c.sweep["r_dyadic"] = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    c.sweep["alpha"] = {1.0, 2.0, 5.0};
    c.sweep["K"] = {16.0, 32.0};
    c.tolerances["plancherel_rel"] = 2e-2;
    c.tolerances["reconstruct_rel"] = 1e-2;
    c.tolerances["identity_rel"] = 1e-3;
    c.tolerances["slope_slack"] = 0.5;
    c.tolerances["partition_residual"] = 1e-10;
    c.tolerances["decomp_rel"] = 1e-3;
    c.tolerances["dilation_rel"] = 1e-2;
    c.tolerances["ratio_spread"] = 10.0;
    return c;
  }

  double tol(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
  }

  void validate() const {
    grid.validate();
    riesz.validate();
    maximal.validate();
    if (spectral.nodes < 2 || !(spectral.lambda_min > 0.0) ||
        !(spectral.lambda_min < spectral.lambda_max) || spectral.K < 0)
      throw std::invalid_argument("ExperimentConfig: bad spectral section");
    for (const auto& [name, list] : sweep)
      if (list.empty())
        throw std::invalid_argument("ExperimentConfig: empty sweep list " + name);
    for (const auto& [name, v] : tolerances)
      if (!(v > 0.0))
        throw std::invalid_argument("ExperimentConfig: tolerance " + name +
                                    " must be positive");
  }

  /// Rough memory need of a resolution, checked against memory_cap_mb.
  void check_memory(const GridSpec& g, std::size_t field_count) const {
    const double mb =
        static_cast<double>(g.size()) * 16.0 * static_cast<double>(field_count) /
        (1024.0 * 1024.0);
    if (mb > memory_cap_mb)
      throw std::invalid_argument(
          "grid infeasible: estimated " + std::to_string(mb) +
          " MiB for " + std::to_string(field_count) + " fields exceeds cap " +
          std::to_string(memory_cap_mb) + " MiB");
  }
};

// ---- JSON (config files are plain JSON) ------------------------------------

inline void from_json_into(const nlohmann::json& j, ExperimentConfig& c) {
  using nlohmann::json;
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (g.contains("n")) c.grid.n = g.at("n").get<int>();
    if (g.contains("extent_z")) c.grid.extent_z = g.at("extent_z").get<double>();
    if (g.contains("extent_t")) c.grid.extent_t = g.at("extent_t").get<double>();
    if (g.contains("m_z")) c.grid.m_z = g.at("m_z").get<int>();
    if (g.contains("m_t")) c.grid.m_t = g.at("m_t").get<int>();
  }
  if (j.contains("spectral")) {
    const auto& s = j.at("spectral");
    if (s.contains("K")) c.spectral.K = s.at("K").get<int>();
    if (s.contains("lambda_min")) c.spectral.lambda_min = s.at("lambda_min").get<double>();
    if (s.contains("lambda_max")) c.spectral.lambda_max = s.at("lambda_max").get<double>();
    if (s.contains("nodes")) c.spectral.nodes = s.at("nodes").get<int>();
  }
  if (j.contains("riesz")) {
    const auto& r = j.at("riesz");
    c.riesz.n = c.grid.n;
    if (r.contains("alpha")) c.riesz.alpha = r.at("alpha").get<double>();
    if (r.contains("r")) c.riesz.r = r.at("r").get<double>();
    if (r.contains("delta")) c.riesz.delta = r.at("delta").get<double>();
    if (r.contains("kappa")) c.riesz.kappa = r.at("kappa").get<double>();
    if (r.contains("b")) c.riesz.b = r.at("b").get<double>();
    if (r.contains("p1")) c.riesz.p1 = r.at("p1").get<double>();
    if (r.contains("p2")) c.riesz.p2 = r.at("p2").get<double>();
  }
  if (j.contains("maximal")) {
    const auto& m = j.at("maximal");
    if (m.contains("k_min")) c.maximal.k_min = m.at("k_min").get<int>();
    if (m.contains("k_max")) c.maximal.k_max = m.at("k_max").get<int>();
    if (m.contains("r_samples")) c.maximal.r_samples = m.at("r_samples").get<int>();
  }
  if (j.contains("sweep"))
    for (const auto& [k, v] : j.at("sweep").items())
      c.sweep[k] = v.get<std::vector<double>>();
  if (j.contains("tolerances"))
    for (const auto& [k, v] : j.at("tolerances").items())
      c.tolerances[k] = v.get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output_path")) c.output_path = j.at("output_path").get<std::string>();
  if (j.contains("memory_cap_mb")) c.memory_cap_mb = j.at("memory_cap_mb").get<double>();
  if (j.contains("experiments")) c.overrides = j.at("experiments");
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["grid"] = {{"n", c.grid.n},
               {"extent_z", c.grid.extent_z},
               {"extent_t", c.grid.extent_t},
               {"m_z", c.grid.m_z},
               {"m_t", c.grid.m_t}};
  j["spectral"] = {{"K", c.spectral.K},
                   {"lambda_min", c.spectral.lambda_min},
                   {"lambda_max", c.spectral.lambda_max},
                   {"nodes", c.spectral.nodes}};
  j["riesz"] = {{"alpha", c.riesz.alpha}, {"r", c.riesz.r},
                {"delta", c.riesz.delta}, {"kappa", c.riesz.kappa},
                {"b", c.riesz.b},         {"p1", c.riesz.p1},
                {"p2", c.riesz.p2}};
  j["maximal"] = {{"k_min", c.maximal.k_min},
                  {"k_max", c.maximal.k_max},
                  {"r_samples", c.maximal.r_samples}};
  j["sweep"] = c.sweep;
  j["tolerances"] = c.tolerances;
  j["seed"] = c.seed;
  j["output_path"] = c.output_path;
  j["memory_cap_mb"] = c.memory_cap_mb;
  if (!c.overrides.is_null()) j["experiments"] = c.overrides;
  return j;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config " + path);
  nlohmann::json j = nlohmann::json::parse(is);
  ExperimentConfig c = ExperimentConfig::defaults();
  from_json_into(j, c);
  c.validate();
  return c;
}

inline std::uint64_t config_hash(const ExperimentConfig& c) {
  const std::string s = to_json(c).dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

// ---- seeded test-field family ----------------------------------------------

struct TestField {
  std::string name;
  SampledField f;
};

// Five members spanning low and high t-frequency content: unit Gaussian,
// shifted, modulated, Hermite-weighted in t, anisotropic. Shifts, phases
// and widths are drawn from the seeded generator in a fixed order.
inline std::vector<TestField> make_test_family(const GridSpec& g,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<TestField> fam;

  auto gauss = [](std::span<const double> zc, double t, double a, double b) {
    double zz = 0.0;
    for (double c : zc) zz += c * c;
    return std::exp(-(a * zz + b * t * t));
  };

  fam.push_back({"gauss", SampledField::sample(g, [&](auto zc, double t) {
                   return cplx(gauss(zc, t, 1.0, 1.0), 0.0);
                 })});

  std::vector<double> shift(static_cast<std::size_t>(2 * g.n) + 1);
  for (std::size_t a = 0; a + 1 < shift.size(); ++a)
    shift[a] = 1.5 * unif(rng) - 0.75;
  shift.back() = 2.0 * unif(rng) - 1.0;
  fam.push_back({"gauss-shift", SampledField::sample(g, [&](auto zc, double t) {
                   double zz = 0.0;
                   for (std::size_t a = 0; a < zc.size(); ++a) {
                     const double d = zc[a] - shift[a];
                     zz += d * d;
                   }
                   const double dt = t - shift.back();
                   return cplx(std::exp(-(zz + dt * dt)), 0.0);
                 })});

  // modulation frequencies stay low enough that the shifted spectral
  // content fits the runners' lambda windows
  const double lam0 = 0.3 + 0.5 * unif(rng);
  fam.push_back({"gauss-mod", SampledField::sample(g, [&](auto zc, double t) {
                   const double amp = gauss(zc, t, 1.0, 1.0);
                   return cplx(std::cos(lam0 * t), std::sin(lam0 * t)) * amp;
                 })});

  const int horder = 1 + static_cast<int>(unif(rng) * 3.0);
  fam.push_back({"gauss-hermite", SampledField::sample(g, [&](auto zc, double t) {
                   double h;  // physicists' Hermite, orders 1..3
                   switch (horder) {
                     case 1: h = 2.0 * t; break;
                     case 2: h = 4.0 * t * t - 2.0; break;
                     default: h = 8.0 * t * t * t - 12.0 * t; break;
                   }
                   return cplx(h * gauss(zc, t, 1.0, 1.0), 0.0);
                 })});

  const double wa = 0.6 + 0.8 * unif(rng);
  const double wb = 0.6 + 0.8 * unif(rng);
  fam.push_back({"gauss-aniso", SampledField::sample(g, [&](auto zc, double t) {
                   return cplx(gauss(zc, t, wa, wb), 0.0);
                 })});
  return fam;
}

// ---- reports -----------------------------------------------------------------

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct ReportRow {
  std::string id;
  std::map<std::string, std::string> params;
  std::map<std::string, double> measured;
  bool pass = true;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::string provenance;

  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

inline std::string make_provenance(const ExperimentConfig& c) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "heis-%s config=%016" PRIx64, kLibraryVersion,
                config_hash(c));
  return buf;
}

// One header line, then one line per row. Columns: experiment_id, every
// parameter name sorted, every measured name sorted, pass. Missing cells
// stay empty; floats carry 17 significant digits; LF line endings.
inline void emit_csv(const ExperimentReport& report, const std::string& path) {
  std::set<std::string> pnames, mnames;
  for (const auto& r : report.rows) {
    for (const auto& [k, v] : r.params) pnames.insert(k);
    for (const auto& [k, v] : r.measured) mnames.insert(k);
  }
  std::string out = "experiment_id";
  for (const auto& p : pnames) out += "," + p;
  for (const auto& m : mnames) out += "," + m;
  out += ",pass\n";
  for (const auto& r : report.rows) {
    out += r.id;
    for (const auto& p : pnames) {
      auto it = r.params.find(p);
      out += ",";
      if (it != r.params.end()) out += it->second;
    }
    for (const auto& m : mnames) {
      auto it = r.measured.find(m);
      out += ",";
      if (it != r.measured.end()) out += fmt17(it->second);
    }
    out += r.pass ? ",1\n" : ",0\n";
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("emit_csv: cannot open " + path);
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw std::runtime_error("emit_csv: write failed for " + path);
}

// ---- slope fits ----------------------------------------------------------------

struct SlopeFit {
  bool ok = false;
  double slope = 0.0;
  int points = 0;
};

/// Least-squares slope of log(y) against log(x) over positive entries.
inline SlopeFit fit_loglog(std::span<const double> xs, std::span<const double> ys) {
  SlopeFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
    if (xs[i] > 0.0 && ys[i] > 0.0) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  }
  fit.points = static_cast<int>(lx.size());
  if (fit.points < 2) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double nn = static_cast<double>(lx.size());
  const double den = nn * sxx - sx * sx;
  if (den == 0.0) return fit;
  fit.slope = (nn * sxy - sx * sy) / den;
  fit.ok = true;
  return fit;
}

}  // namespace heis
