#include "rilab/cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <set>
#include <sstream>

#include "rilab/brownian.hpp"
#include "rilab/experiments.hpp"
#include "rilab/interlace.hpp"
#include "rilab/lerw.hpp"
#include "rilab/parallel.hpp"
#include "rilab/potential.hpp"

namespace rilab::cli {

namespace {

using json = nlohmann::ordered_json;

/// Keys accepted in config files and --set overrides.
const std::set<std::string> kKeys = {"d",  "N",    "m",       "delta", "zeta",   "C1",     "seed",
                                     "workers", "K", "x",     "runs",  "samples", "t", "r",
                                     "lambda",  "method", "index", "tol"};

struct Flags {
  std::optional<int> d;
  std::optional<std::int64_t> N;
  std::optional<std::int64_t> m;
  std::optional<double> delta;
  std::optional<double> zeta;
  std::optional<double> C1;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> K;
  std::optional<std::string> x;
  std::optional<std::uint64_t> runs;
  std::optional<std::uint64_t> samples;
  std::optional<std::int64_t> t;
  std::optional<double> r;
  std::vector<double> lambda;
  std::vector<double> at;
  std::optional<std::string> method;
  std::optional<std::string> index;
  std::optional<double> tol;
  std::optional<std::string> config;
  std::optional<std::string> format;
  std::optional<std::string> output;
  std::vector<std::string> sets;
  bool x_sweep = false;
};

/// Everything a subcommand may read, after config < --set < flag merging.
struct Settings {
  WalkConfig cfg;
  json values;
  std::string format;
  std::string output;
  bool x_sweep = false;

  bool has(const std::string& key) const { return values.contains(key); }

  template <class T>
  T get(const std::string& key, T fallback) const {
    return has(key) ? values.at(key).get<T>() : fallback;
  }
};

struct Output {
  std::string csv;
  json doc;
  std::string summary;
  int code = kExitOk;
};

std::string fmt_prob(double p) { return fmt::format("{:.6f}", p); }
std::string fmt_real(double v) { return fmt::format("{:.12g}", v); }
double round6(double p) { return std::round(p * 1e6) / 1e6; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\n";
}

json config_json(const WalkConfig& cfg) {
  return {{"d", cfg.d},         {"N", cfg.N},   {"m", cfg.m},         {"L", cfg.L()},
          {"A", cfg.A()},       {"n", cfg.n()}, {"delta", cfg.delta}, {"zeta", cfg.zeta},
          {"C1", cfg.C1},       {"seed", cfg.seed}};
}

json point_json(const LatticePoint& p) {
  json a = json::array();
  for (int j = 0; j < p.dim(); ++j) a.push_back(p[j]);
  return a;
}

void check_keys(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + " must be a flat JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!kKeys.count(key)) throw InputError("unknown key '" + key + "' in " + where);
    if (value.is_object()) throw InputError("key '" + key + "' in " + where + " must not be nested");
  }
}

json parse_scalar(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

std::uint64_t env_seed() {
  const char* s = std::getenv("LAB_SEED");
  if (!s || !*s) return 1;
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != std::string(s).size()) throw InputError(std::string("LAB_SEED is not an unsigned integer: ") + s);
  return v;
}

Settings resolve(const Flags& f, const std::string& default_format) {
  json v = json::object();
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in) throw InputError("cannot open config file " + *f.config);
    try {
      v = json::parse(in);
    } catch (const json::exception& e) {
      throw InputError("config file " + *f.config + " is not valid JSON: " + e.what());
    }
    check_keys(v, "config file");
  }
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError("override '" + kv + "' is not key=value");
    const std::string key = kv.substr(0, eq);
    if (!kKeys.count(key)) throw InputError("unknown key '" + key + "' in --set");
    v[key] = parse_scalar(kv.substr(eq + 1));
  }
  auto put = [&](const char* key, const auto& opt) {
    if (opt) v[key] = *opt;
  };
  put("d", f.d);
  put("N", f.N);
  put("m", f.m);
  put("delta", f.delta);
  put("zeta", f.zeta);
  put("C1", f.C1);
  put("seed", f.seed);
  put("workers", f.workers);
  put("K", f.K);
  put("x", f.x);
  put("runs", f.runs);
  put("samples", f.samples);
  put("t", f.t);
  put("r", f.r);
  put("method", f.method);
  put("index", f.index);
  put("tol", f.tol);
  if (!f.lambda.empty()) v["lambda"] = f.lambda;
  if (!f.at.empty()) v["t"] = f.at;

  Settings s;
  s.values = v;
  WalkConfig& c = s.cfg;
  c.d = s.get("d", c.d);
  c.N = s.get("N", c.N);
  c.m = s.get("m", c.m);
  c.delta = s.get("delta", c.delta);
  c.zeta = s.get("zeta", c.zeta);
  c.C1 = s.get("C1", c.C1);
  c.workers = s.get("workers", c.workers);
  c.seed = s.has("seed") ? s.get<std::uint64_t>("seed", 1) : env_seed();
  s.format = f.format.value_or(default_format);
  if (s.format != "csv" && s.format != "json") throw InputError("--format must be csv or json");
  s.output = f.output.value_or("");
  s.x_sweep = f.x_sweep;
  return s;
}

PatternSet pattern_of(const Settings& s) { return PatternSet::preset(s.get<std::string>("K", "origin"), s.cfg.d); }

TorusPoint translation_of(const Settings& s) {
  if (!s.has("x")) return far_corner(s.cfg);
  const LatticePoint x = parse_point(s.get<std::string>("x", ""));
  if (x.dim() != s.cfg.d) throw DimensionError("--x has dimension " + std::to_string(x.dim()) + ", expected d");
  return project(x, s.cfg.N);
}

std::uint64_t runs_of(const Settings& s, std::uint64_t fallback) {
  const auto runs = s.get<std::uint64_t>("runs", fallback);
  if (runs == 0) throw InputError("runs must be positive");
  return runs;
}

void write_atomically(const std::string& path, const std::string& data) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write output file " + path);
    out << data;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw Error("write to " + tmp + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

// Subcommands.

Output cmd_simulate(const Settings& s) {
  const WalkConfig& cfg = s.cfg;
  require_valid(cfg);
  const PatternSet K = pattern_of(s);
  const TorusPoint x = translation_of(s);
  const std::uint64_t runs = runs_of(s, 100);
  const TorusTarget target(K, x);
  const auto summaries = map_runs(runs, cfg.workers, [&](std::uint64_t i) {
    RandomStream rng(cfg.seed, i, stream_tag::walk);
    RunSummary r = run_stopped(cfg, &target, rng);
    r.stretch_endpoints.clear();
    return r;
  });
  const double scale = static_cast<double>(cfg.n()) / static_cast<double>(cfg.volume());
  Output o;
  o.csv = csv_row({"run", "exit_time", "stretches", "scaled_stretches", "hit_mask"});
  json rows = json::array();
  double mean_T = 0;
  for (std::uint64_t i = 0; i < runs; ++i) {
    const auto& r = summaries[i];
    const double scaled = scale * static_cast<double>(r.stretches);
    o.csv += csv_row({std::to_string(i), std::to_string(r.exit_time), std::to_string(r.stretches), fmt_real(scaled),
                      std::to_string(r.hit_mask)});
    rows.push_back({{"run", i},
                    {"exit_time", r.exit_time},
                    {"stretches", r.stretches},
                    {"scaled_stretches", scaled},
                    {"hit_mask", r.hit_mask}});
    mean_T += static_cast<double>(r.exit_time);
  }
  o.doc = {{"config", config_json(cfg)}, {"K", K.describe()}, {"x", x.to_string()}, {"runs", rows}};
  o.summary = fmt::format("simulate: {} runs, mean T = {:.1f}", runs, mean_T / static_cast<double>(runs));
  return o;
}

Output cmd_capacity(const Settings& s) {
  const PatternSet K = pattern_of(s);
  const std::string method = s.get<std::string>("method", "exact");
  CapacityResult res;
  if (method == "exact") {
    res = capacity_exact(K);
  } else if (method == "mc") {
    const double r = s.get("r", 32.0);
    res = capacity_mc(K, r, s.get<std::uint64_t>("samples", 200), CapacityMcOptions{s.cfg.seed, s.cfg.workers});
  } else {
    throw InputError("--method must be exact or mc");
  }
  json points = json::array();
  for (const auto& p : K.points()) points.push_back(point_json(p));
  Output o;
  o.doc = {{"points", points},
           {"method", to_string(res.method)},
           {"value", res.value},
           {"std_error", res.std_error},
           {"r", res.method == CapacityMethod::monte_carlo ? json(res.r_used) : json(nullptr)}};
  o.csv = csv_row({"points", "method", "value", "std_error", "r"});
  o.csv += csv_row({K.describe(), to_string(res.method), fmt_real(res.value), fmt_real(res.std_error),
                    res.method == CapacityMethod::monte_carlo ? fmt_real(res.r_used) : ""});
  o.summary = fmt::format("capacity({}) = {:.9f} [{}]", K.describe(), res.value, to_string(res.method));
  return o;
}

Output cmd_sigma1(const Settings& s) {
  const int d = s.cfg.d;
  if (d < 1) throw InputError("d must be positive");
  Output o;
  if (s.has("samples")) {
    // Sample file: one sigma_1 draw per row, draw i from stream (seed, i).
    const auto count = s.get<std::uint64_t>("samples", 0);
    const auto draws = map_runs(count, s.cfg.workers, [&](std::uint64_t i) {
      RandomStream rng(s.cfg.seed, i, stream_tag::sigma);
      return sample_sigma1(d, rng);
    });
    o.csv = csv_row({"t"});
    for (const double t : draws) o.csv += csv_row({fmt_real(t)});
    o.doc = {{"d", d}, {"seed", s.cfg.seed}, {"samples", draws}};
    o.summary = fmt::format("sigma1: {} samples, d = {}", count, d);
    return o;
  }
  if (s.has("t")) {
    const auto ts = s.values.at("t").is_array() ? s.get<std::vector<double>>("t", {})
                                                : std::vector<double>{s.get<double>("t", 1.0)};
    const ExitLaw law{d};
    o.csv = csv_row({"d", "t", "survival", "density"});
    json rows = json::array();
    for (const double t : ts) {
      const double surv = survival_cube(t, d);
      const double dens = t >= law.t_floor ? density_sigma1(t, d) : std::nan("");
      o.csv += csv_row({std::to_string(d), fmt_real(t), fmt_real(surv), std::isnan(dens) ? "" : fmt_real(dens)});
      rows.push_back({{"t", t}, {"survival", surv}, {"density", std::isnan(dens) ? json(nullptr) : json(dens)}});
    }
    o.doc = {{"d", d}, {"values", rows}};
    o.summary = fmt::format("sigma1: survival and density at {} time(s), d = {}", ts.size(), d);
    return o;
  }
  const auto lambdas = s.get<std::vector<double>>("lambda", {0.1, 0.5, 1.0, 2.0, 5.0});
  const double mean = mean_sigma1(d);
  o.csv = csv_row({"d", "lambda", "laplace", "mean"});
  json rows = json::array();
  for (const double lam : lambdas) {
    const double lt = laplace_sigma1(lam, d);
    o.csv += csv_row({std::to_string(d), fmt_real(lam), fmt_real(lt), fmt_real(mean)});
    rows.push_back({{"lambda", lam}, {"laplace", lt}});
  }
  o.doc = {{"d", d}, {"mean", mean}, {"laplace", rows}};
  o.summary = fmt::format("sigma1: d = {}, E[sigma1] = {:.9f}", d, mean);
  return o;
}

std::string mask_points(const PatternSet& K, std::uint64_t mask) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < K.size(); ++i) {
    if (!(mask >> i & 1)) continue;
    if (!first) s += ";";
    s += K[i].to_string();
    first = false;
  }
  return s + "}";
}

Output cmd_marginals(const Settings& s) {
  const WalkConfig& cfg = s.cfg;
  require_valid(cfg);
  const PatternSet K = pattern_of(s);
  const PatternLaw law = PatternLaw::mixed(K, MixtureSpec{cfg.d, cfg.A()});
  const std::uint64_t runs = s.get<std::uint64_t>("runs", 0);
  std::map<std::uint64_t, Estimate> emp;
  if (runs > 0) emp = empirical_marginals(cfg, K, translation_of(s), runs);

  Output o;
  o.csv = csv_row({"mask", "subset", "exact", "empirical", "stderr", "count"});
  json exact = json::object();
  json empirical = json::object();
  json counts = json::object();
  for (std::uint64_t B = 0; B < law.pmf().size(); ++B) {
    const std::string key = std::to_string(B);
    exact[key] = round6(law.pmf()[B]);
    std::vector<std::string> row = {key, mask_points(K, B), fmt_prob(law.pmf()[B]), "", "", ""};
    if (runs > 0) {
      const Estimate& e = emp.at(B);
      empirical[key] = round6(e.mean);
      counts[key] = e.successes;
      row[3] = fmt_prob(e.mean);
      row[4] = fmt_prob(e.std_error);
      row[5] = std::to_string(e.successes);
    }
    o.csv += csv_row(row);
  }
  o.doc = exact;
  if (runs > 0) {
    o.doc = {{"K", K.describe()}, {"A", cfg.A()}, {"exact", exact}};
    o.doc["runs"] = runs;
    o.doc["seed"] = cfg.seed;
    o.doc["empirical"] = empirical;
    o.doc["counts"] = counts;
  }
  o.summary = fmt::format("marginals: {} cells for K = {}", law.pmf().size(), K.describe());
  return o;
}

Output cmd_verify(const Settings& s) {
  const WalkConfig& cfg = s.cfg;
  require_valid(cfg);
  const PatternSet K = pattern_of(s);
  const std::uint64_t runs = runs_of(s, 20000);
  const double tol = s.get("tol", 0.05);
  const std::string K_id = s.get<std::string>("K", "origin");

  std::vector<TorusPoint> xs;
  if (s.x_sweep) {
    // Diagonal translations (j, ..., j) that satisfy the separation hypothesis.
    for (std::int64_t j = 0; j <= cfg.N / 2; ++j) {
      LatticePoint p(cfg.d);
      for (int a = 0; a < cfg.d; ++a) p[a] = j;
      const TorusPoint x = project(p, cfg.N);
      if (separation_distance(cfg, K, x) >= static_cast<double>(cfg.separation())) xs.push_back(x);
    }
    if (xs.empty()) throw InputError("separation hypothesis leaves no diagonal translation to sweep");
  } else {
    xs.push_back(translation_of(s));
  }

  Output o;
  o.csv = csv_row({"experiment", "d", "N", "m", "A", "delta", "zeta", "C1", "K_id", "x", "runs", "lhs", "stderr",
                   "rhs", "gap", "z", "seed"});
  json rows = json::array();
  double worst = 0;
  for (const auto& x : xs) {
    const VerifyReport r = verify_theorem(cfg, K, x, runs, tol);
    const std::string experiment = s.x_sweep ? "verify-sweep" : "verify";
    o.csv += csv_row({experiment, std::to_string(cfg.d), std::to_string(cfg.N), std::to_string(cfg.m),
                      fmt_real(cfg.A()), fmt_real(cfg.delta), fmt_real(cfg.zeta), fmt_real(cfg.C1), K_id,
                      x.to_string(), std::to_string(runs), fmt_prob(r.lhs.mean), fmt_prob(r.lhs.std_error),
                      fmt_prob(r.rhs), fmt_prob(r.gap), fmt::format("{:.4f}", r.z), std::to_string(cfg.seed)});
    rows.push_back({{"experiment", experiment},
                    {"d", cfg.d},
                    {"N", cfg.N},
                    {"m", cfg.m},
                    {"A", cfg.A()},
                    {"delta", cfg.delta},
                    {"zeta", cfg.zeta},
                    {"C1", cfg.C1},
                    {"K_id", K_id},
                    {"x", x.to_string()},
                    {"runs", runs},
                    {"lhs", round6(r.lhs.mean)},
                    {"stderr", round6(r.lhs.std_error)},
                    {"rhs", round6(r.rhs)},
                    {"gap", round6(r.gap)},
                    {"z", std::round(r.z * 1e4) / 1e4},
                    {"seed", cfg.seed},
                    {"avoided", r.lhs.successes},
                    {"bias_tol", tol},
                    {"within_bias", r.within_bias},
                    {"within_noise", r.within_noise}});
    if (std::abs(r.gap) > std::abs(worst)) worst = r.gap;
    if (!r.within_bias) o.code = kExitOutside;
  }
  o.doc = s.x_sweep ? json(rows) : rows.front();
  o.summary = fmt::format("verify: {} translation(s), max |gap| = {:.6f}, tolerance {} -> {}", xs.size(),
                          std::abs(worst), tol, o.code == kExitOk ? "within" : "OUTSIDE");
  return o;
}

Output cmd_ks(const Settings& s) {
  const WalkConfig& cfg = s.cfg;
  const std::uint64_t runs = runs_of(s, 2000);
  const double tol = s.get("tol", 0.1);
  const KsReport r = ks_exit_time(cfg, runs);
  const double mean = mean_of(r.scaled_stretches).mean;
  Output o;
  o.csv = csv_row({"d", "N", "m", "runs", "D", "D_exit_time", "mean_scaled", "predicted_mean", "seed"});
  o.csv += csv_row({std::to_string(cfg.d), std::to_string(cfg.N), std::to_string(cfg.m), std::to_string(runs),
                    fmt_prob(r.D), fmt_prob(r.D_exit_time), fmt_real(mean), fmt_real(r.predicted_mean),
                    std::to_string(cfg.seed)});
  o.doc = {{"config", config_json(cfg)},  {"runs", runs}, {"D", round6(r.D)}, {"D_exit_time", round6(r.D_exit_time)},
           {"mean_scaled", mean}, {"predicted_mean", r.predicted_mean}, {"tol", tol}};
  o.code = r.D < tol ? kExitOk : kExitOutside;
  o.summary = fmt::format("ks: D = {:.4f} (T-based {:.4f}), tolerance {} -> {}", r.D, r.D_exit_time, tol,
                          o.code == kExitOk ? "within" : "OUTSIDE");
  return o;
}

Output cmd_mixing(const Settings& s) {
  const WalkConfig& cfg = s.cfg;
  require_valid(cfg);
  const std::int64_t t = s.get<std::int64_t>("t", cfg.n());
  const std::uint64_t samples = s.get<std::uint64_t>("samples", 1000000);
  const MixingReport r = mixing_check(cfg, t, samples);
  const double scale = static_cast<double>(cfg.volume()) / static_cast<double>(samples);
  Output o;
  o.csv = csv_row({"index", "x", "count", "scaled"});
  json hist = json::array();
  for (std::uint64_t i = 0; i < r.histogram.size(); ++i) {
    const double scaled = static_cast<double>(r.histogram[i]) * scale;
    o.csv += csv_row({std::to_string(i), torus_point_at(i, cfg.d, cfg.N).to_string(), std::to_string(r.histogram[i]),
                      fmt_prob(scaled)});
    hist.push_back(r.histogram[i]);
  }
  o.doc = {{"config", config_json(cfg)}, {"t", t},       {"samples", samples}, {"max_scaled", round6(r.max_scaled)},
           {"min_scaled", round6(r.min_scaled)}, {"histogram", hist}};
  o.summary = fmt::format("mixing: t = {}, max N^d p = {:.4f}, min N^d p = {:.4f}", t, r.max_scaled, r.min_scaled);
  return o;
}

Output cmd_stretches(const Settings& s) {
  const WalkConfig& cfg = s.cfg;
  const std::uint64_t runs = runs_of(s, 2000);
  const StretchReport r = bad_stretch_stats(cfg, runs);
  Output o;
  o.csv = csv_row({"n", "good_threshold", "bad_threshold", "runs", "stretches", "over_good", "over_bad",
                   "frac_over_good", "frac_over_bad", "mean_S", "frac_outside_window", "frac_above_logN", "seed"});
  o.csv += csv_row({std::to_string(r.n), fmt_real(r.thresholds.good_threshold), fmt_real(r.thresholds.bad_threshold),
                    std::to_string(runs), std::to_string(r.stretches), std::to_string(r.over_good),
                    std::to_string(r.over_bad), fmt_prob(r.frac_over_good), fmt_prob(r.frac_over_bad),
                    fmt_real(r.mean_S), fmt_prob(r.frac_outside_window), fmt_prob(r.frac_above_log_N),
                    std::to_string(cfg.seed)});
  o.doc = {{"config", config_json(cfg)},
           {"n", r.n},
           {"good_threshold", r.thresholds.good_threshold},
           {"bad_threshold", r.thresholds.bad_threshold},
           {"runs", runs},
           {"stretches", r.stretches},
           {"over_good", r.over_good},
           {"over_bad", r.over_bad},
           {"frac_over_good", round6(r.frac_over_good)},
           {"frac_over_bad", round6(r.frac_over_bad)},
           {"mean_S", r.mean_S},
           {"frac_outside_window", round6(r.frac_outside_window)},
           {"frac_above_logN", round6(r.frac_above_log_N)}};
  o.summary = fmt::format("stretches: n = {}, over good {:.4f}, over bad {:.4f}, S n/N^d > log N in {:.4f} of runs",
                          r.n, r.frac_over_good, r.frac_over_bad, r.frac_above_log_N);
  return o;
}

Output cmd_hashbench(const Settings& s) {
  const WalkConfig& cfg = s.cfg;
  const std::uint64_t runs = runs_of(s, 200);
  const HashBenchReport r = hash_bench(cfg, runs);
  Output o;
  o.csv = csv_row({"N", "d", "m", "L", "inserted", "occupied", "load_factor", "max_chain", "mean_probes",
                   "dense_bytes_equiv", "store_bytes"});
  json rows = json::array();
  for (const auto& row : r.rows) {
    o.csv += csv_row({std::to_string(row.N), std::to_string(row.d), std::to_string(row.m), std::to_string(row.L),
                      std::to_string(row.inserted), std::to_string(row.occupied), fmt_prob(row.load_factor),
                      std::to_string(row.max_chain), fmt_real(row.mean_probes), std::to_string(row.dense_bytes_equiv),
                      std::to_string(row.store_bytes)});
    rows.push_back({{"N", row.N},
                    {"d", row.d},
                    {"m", row.m},
                    {"L", row.L},
                    {"inserted", row.inserted},
                    {"occupied", row.occupied},
                    {"load_factor", round6(row.load_factor)},
                    {"max_chain", row.max_chain},
                    {"mean_probes", row.mean_probes},
                    {"dense_bytes_equiv", row.dense_bytes_equiv},
                    {"store_bytes", row.store_bytes}});
  }
  o.doc = {{"config", config_json(cfg)},
           {"memory_ratio", r.memory_ratio},
           {"mean_occupied_fraction", round6(r.mean_occupied_fraction)},
           {"mean_load_factor", round6(r.mean_load_factor)},
           {"max_chain", r.max_chain},
           {"rows", rows}};
  o.summary = fmt::format("hashbench: {} runs, occupied fraction {:.4f}, dense/hash memory ratio {:.1f}", runs,
                          r.mean_occupied_fraction, r.memory_ratio);
  return o;
}

Output cmd_lerw(const Settings& s) {
  const WalkConfig& cfg = s.cfg;
  const std::uint64_t runs = runs_of(s, 200);
  const std::string index = s.get<std::string>("index", "hash");
  if (index != "hash" && index != "dense") throw InputError("--index must be hash or dense");
  const auto metrics = lerw_ensemble(cfg, runs, index == "hash" ? SiteIndex::hash_store : SiteIndex::dense);
  Output o;
  o.csv = csv_row({"d", "L", "seed", "gen_len", "lerw_len", "visited", "store_probes"});
  json rows = json::array();
  double mean_gen = 0;
  for (const auto& mt : metrics) {
    o.csv += csv_row({std::to_string(cfg.d), std::to_string(cfg.L()), std::to_string(cfg.seed),
                      std::to_string(mt.generator_length), std::to_string(mt.erased_length), std::to_string(mt.visited),
                      std::to_string(mt.store_probes)});
    rows.push_back({{"d", cfg.d},
                    {"L", cfg.L()},
                    {"seed", cfg.seed},
                    {"gen_len", mt.generator_length},
                    {"lerw_len", mt.erased_length},
                    {"visited", mt.visited},
                    {"store_probes", mt.store_probes}});
    mean_gen += static_cast<double>(mt.generator_length);
  }
  o.doc = rows;
  const double L = static_cast<double>(cfg.L());
  o.summary = fmt::format("lerw: {} runs, mean generator length / L^2 = {:.3f}", runs,
                          mean_gen / static_cast<double>(runs) / (L * L));
  return o;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--d", f.d, "dimension");
  sub->add_option("--N", f.N, "torus side");
  sub->add_option("--m", f.m, "box multiplier, L = m N");
  sub->add_option("--delta", f.delta, "stretch exponent, n = floor(N^delta)");
  sub->add_option("--zeta", f.zeta, "separation exponent, g = floor(N^zeta)");
  sub->add_option("--C1", f.C1, "good-stretch constant");
  sub->add_option("--K", f.K, "pattern: origin, pair, plus, cube2 or 'x1,..;y1,..'");
  sub->add_option("--x", f.x, "translation 'a,b,c' (projected); default far corner");
  sub->add_option("--runs", f.runs, "number of runs");
  sub->add_option("--seed", f.seed, "seed (overrides config and LAB_SEED)");
  sub->add_option("--workers", f.workers, "worker threads");
  sub->add_option("--format", f.format, "csv or json");
  sub->add_option("--output", f.output, "output file (written atomically)");
  sub->add_option("--config", f.config, "flat JSON config");
  sub->add_option("--set", f.sets, "key=value override")->take_all();
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projected random walk and interlacement experiments", "rilab"};
  app.require_subcommand(1, 1);
  Flags f;
  struct Entry {
    const char* name;
    const char* help;
    const char* format;
    Output (*run)(const Settings&);
  };
  const Entry entries[] = {
      {"simulate", "run stopped walks and report T, S and pattern hits", "csv", cmd_simulate},
      {"capacity", "capacity of a pattern (exact or Monte Carlo)", "json", cmd_capacity},
      {"sigma1", "Laplace transform and mean of the cube exit time", "csv", cmd_sigma1},
      {"marginals", "pattern law of the mixed interlacement (and empirical with --runs)", "json", cmd_marginals},
      {"verify", "estimate the avoidance probability and compare with its limit", "csv", cmd_verify},
      {"ks", "KS distance of the scaled stretch count to its limit law", "csv", cmd_ks},
      {"mixing", "torus distribution of the walk at time t", "csv", cmd_mixing},
      {"stretches", "good/bad stretch diagnostics", "csv", cmd_stretches},
      {"hashbench", "hash store occupancy for stopped trajectories", "csv", cmd_hashbench},
      {"lerw", "loop-erased walks to the box boundary", "csv", cmd_lerw},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, f);
    const std::string name = e.name;
    if (name == "capacity") {
      sub->add_option("--r", f.r, "ball radius for Monte Carlo");
      sub->add_option("--samples", f.samples, "walks per boundary point");
      sub->add_option("--method", f.method, "exact or mc");
    } else if (name == "sigma1") {
      sub->add_option("--lambda", f.lambda, "Laplace argument(s)");
      sub->add_option("--at", f.at, "times for survival and density rows");
      sub->add_option("--samples", f.samples, "write this many samples instead");
    } else if (name == "mixing") {
      sub->add_option("--t", f.t, "walk length, at least n");
      sub->add_option("--samples", f.samples, "number of walks, at least 100 N^d");
    } else if (name == "verify") {
      sub->add_option("--tol", f.tol, "bias tolerance on |gap|");
      sub->add_flag("--x-sweep", f.x_sweep, "sweep diagonal translations");
    } else if (name == "ks") {
      sub->add_option("--tol", f.tol, "tolerance on D");
    } else if (name == "lerw") {
      sub->add_option("--index", f.index, "hash or dense");
    }
    subs.emplace_back(sub, &e);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (const auto& [sub, entry] : subs) {
    if (!sub->parsed()) continue;
    try {
      const Settings s = resolve(f, entry->format);
      Output o = entry->run(s);
      const std::string data = s.format == "json" ? o.doc.dump(2) + "\n" : o.csv;
      if (s.output.empty()) {
        out << data;
      } else {
        write_atomically(s.output, data);
      }
      err << o.summary << "\n";
      return o.code;
    } catch (const InputError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const json::exception& e) {
      err << "error: bad config value: " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  return kExitUsage;
}

int run_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace rilab::cli
