// wintgen: command-line front end for the DDVV / Wintgen ideal toolkit.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "wintgen/wintgen.hpp"
#include "wintgen/report.hpp"

using namespace wintgen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr double kGaussVerifyThreshold = 1e-8;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

struct Output {
  Json json;
  std::string csv;
  std::string summary;
  int exit_code = kExitOk;
};

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  try {
    Json j = Json::parse(in);
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    return j;
  } catch (const Json::parse_error& e) {
    throw UsageError("config " + path + " is not valid JSON: " + e.what());
  }
}

template <class T>
T take(const Json& cfg, const std::string& key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg.at(key).get<T>();
  } catch (const Json::exception&) {
    throw UsageError("config key '" + key + "' has the wrong type");
  }
}

std::uint64_t resolve_seed(const Common& c, const Json& cfg) {
  if (c.seed) return *c.seed;
  if (cfg.contains("seed") && !cfg["seed"].is_number_unsigned()) throw UsageError("seed must be a non-negative integer");
  return take<std::uint64_t>(cfg, "seed", 0);
}

double resolve_tol(const Common& c, const Json& cfg) {
  const double t = c.tol ? *c.tol : take<double>(cfg, "tol", kDefaultTol);
  if (!(t > 0.0)) throw UsageError("tol must be positive");
  return t;
}

int positive(const Json& cfg, const std::string& key, int fallback, std::optional<int> flag) {
  const int v = flag ? *flag : take<int>(cfg, key, fallback);
  if (v < 1) throw UsageError(key + " must be at least 1");
  return v;
}

GridSpec parse_grid(const Json& j, const Box& domain) {
  if (j.is_number_integer()) {
    if (j.get<int>() < 1) throw UsageError("grid count must be at least 1");
    return GridSpec::uniform(domain, j.get<int>());
  }
  detail::reject_unknown(j, {"count", "min", "max"}, "grid");
  GridSpec g;
  g.min = j.contains("min") ? detail::json_vec(j["min"], "grid.min") : domain.lo;
  g.max = j.contains("max") ? detail::json_vec(j["max"], "grid.max") : domain.hi;
  const auto n = static_cast<std::size_t>(domain.lo.size());
  if (static_cast<std::size_t>(g.min.size()) != n || static_cast<std::size_t>(g.max.size()) != n)
    throw UsageError("grid min/max do not match the chart dimension");
  if (!j.contains("count")) throw UsageError("grid needs count");
  const Json& c = j["count"];
  if (c.is_number_integer()) g.count.assign(n, c.get<int>());
  else if (c.is_array() && c.size() == n) {
    for (const auto& k : c) {
      if (!k.is_number_integer()) throw UsageError("grid counts must be integers");
      g.count.push_back(k.get<int>());
    }
  } else {
    throw UsageError("grid count must be an integer or one integer per axis");
  }
  for (int k : g.count)
    if (k < 1) throw UsageError("grid counts must be at least 1");
  return g;
}

Json grid_json(const GridSpec& g) {
  return Json{{"min", to_json(g.min)}, {"max", to_json(g.max)}, {"count", g.count}};
}

Mat json_mat(const Json& j, const std::string& what) {
  if (!j.is_array()) throw UsageError(what + " must be an array of rows");
  if (j.empty()) return Mat(0, 0);
  Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vec row = detail::json_vec(j[r], what);
    if (row.size() != m.cols()) throw UsageError(what + " rows differ in length");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

// ---------------------------------------------------------------------------
// commands

struct FuzzFlags {
  std::optional<long long> count;
  std::optional<long long> inject;
};

Output run_fuzz(const Common& c, const FuzzFlags& f) {
  const Json cfg = load_config(c.config_path);
  detail::reject_unknown(cfg, {"command", "count", "inject", "n_min", "n_max", "m_min", "m_max", "seed", "tol"},
                         "fuzz config");
  FuzzOptions o;
  const long long count = f.count ? *f.count : take<long long>(cfg, "count", 1000);
  const long long inject = f.inject ? *f.inject : take<long long>(cfg, "inject", 0);
  if (count < 1) throw UsageError("count must be at least 1");
  if (inject < 0) throw UsageError("inject must be non-negative");
  o.count = static_cast<std::size_t>(count);
  o.inject = static_cast<std::size_t>(inject);
  o.n_min = take<int>(cfg, "n_min", 2);
  o.n_max = take<int>(cfg, "n_max", 6);
  o.m_min = take<int>(cfg, "m_min", 1);
  o.m_max = take<int>(cfg, "m_max", 5);
  o.seed = resolve_seed(c, cfg);
  o.tol = resolve_tol(c, cfg);
  const FuzzReport r = ddvv_fuzz(o);
  Json effective{{"count", o.count}, {"inject", o.inject}, {"n_min", o.n_min}, {"n_max", o.n_max},
                 {"m_min", o.m_min}, {"m_max", o.m_max}, {"seed", o.seed},     {"tol", o.tol}};
  Output out;
  out.json = report_envelope("fuzz", effective);
  out.json["result"] = fuzz_json(r);
  out.csv = fuzz_csv(r);
  out.summary = fuzz_summary(r);
  out.exit_code = r.violations == 0 ? kExitOk : kExitFailure;
  return out;
}

struct ScanFlags {
  std::string chart;
  std::optional<int> grid;
};

Output run_scan(const Common& c, const ScanFlags& f) {
  const Json cfg = load_config(c.config_path);
  detail::reject_unknown(cfg, {"command", "chart", "grid", "seed", "tol"}, "scan config");
  Json chart_spec;
  if (!f.chart.empty()) chart_spec = Json{{"zoo", f.chart}};
  else if (cfg.contains("chart")) chart_spec = cfg["chart"];
  else throw UsageError("scan needs a chart (--chart or config key 'chart')");
  const ChartImmersion chart = parse_chart(chart_spec);
  const GridSpec grid = f.grid ? GridSpec::uniform(chart.domain(), *f.grid)
                               : parse_grid(cfg.contains("grid") ? cfg["grid"] : Json(32), chart.domain());
  if (f.grid && *f.grid < 1) throw UsageError("grid count must be at least 1");
  const double tol = resolve_tol(c, cfg);
  const ScanReport r = ddvv_scan(chart, grid, tol);
  Json effective{{"chart", chart_spec}, {"grid", grid_json(grid)}, {"tol", tol}, {"seed", resolve_seed(c, cfg)}};
  Output out;
  out.json = report_envelope("scan", effective);
  out.json["result"] = scan_json(r);
  out.json["result"]["chart_label"] = chart.label();
  out.csv = scan_csv(r);
  out.summary = "chart: " + chart.label() + "\n" + scan_summary(r);
  return out;
}

struct GaussFlags {
  std::optional<int> grid, fibers, directions;
};

Output run_gauss(const Common& c, const GaussFlags& f) {
  const Json cfg = load_config(c.config_path);
  detail::reject_unknown(cfg, {"command", "surface", "tau", "grid", "fibers", "directions", "seed", "tol"},
                         "gauss-verify config");
  if (!cfg.contains("surface") || !cfg.contains("tau")) throw UsageError("gauss-verify needs surface and tau");
  const ChartImmersion g = parse_chart(cfg["surface"]);
  const ScalarField tau = parse_scalar_field(cfg["tau"], g.n());
  const SupportedSurface s{g, tau};
  validate(s);
  const GridSpec grid = f.grid ? GridSpec::uniform(g.domain(), *f.grid)
                               : parse_grid(cfg.contains("grid") ? cfg["grid"] : Json(5), g.domain());
  if (f.grid && *f.grid < 1) throw UsageError("grid count must be at least 1");
  const int fibers = positive(cfg, "fibers", 8, f.fibers);
  const int directions = positive(cfg, "directions", 2, f.directions);
  const std::uint64_t seed = resolve_seed(c, cfg);
  const GaussVerifyReport r = verify_gauss(s, grid.points(), fibers, directions, seed);
  Json effective{{"surface", cfg["surface"]}, {"tau", cfg["tau"]}, {"grid", grid_json(grid)},
                 {"fibers", fibers},           {"directions", directions}, {"seed", seed},
                 {"tol", resolve_tol(c, cfg)}};
  Output out;
  out.json = report_envelope("gauss-verify", effective);
  out.json["result"] = gauss_json(r);
  out.json["result"]["threshold"] = kGaussVerifyThreshold;
  out.csv = gauss_csv(r);
  out.summary = gauss_summary(r);
  out.exit_code = r.stats.accepted > 0 && r.worst() <= kGaussVerifyThreshold ? kExitOk : kExitFailure;
  return out;
}

struct DecomposeFlags {
  std::optional<int> grid;
};

SyntheticPullback parse_synthetic(const Json& j) {
  detail::reject_unknown(j, {"surface", "tau", "domain", "section"}, "synthetic");
  for (const char* k : {"surface", "tau", "domain", "section"})
    if (!j.contains(k)) throw UsageError(std::string("synthetic needs ") + k);
  const ChartImmersion g = parse_chart(j["surface"]);
  const SupportedSurface s{g, parse_scalar_field(j["tau"], g.n())};
  const Box domain = detail::json_box(j["domain"]);
  const Json& sj = j["section"];
  detail::reject_unknown(sj, {"s0", "slope_y", "slope_t", "origin"}, "section");
  if (!sj.contains("s0") || !sj.contains("slope_y") || !sj.contains("slope_t"))
    throw UsageError("section needs s0, slope_y and slope_t");
  SectionSpec sec;
  sec.s0 = detail::json_vec(sj["s0"], "section.s0");
  sec.slope_y = json_mat(sj["slope_y"], "section.slope_y");
  sec.slope_t = json_mat(sj["slope_t"], "section.slope_t");
  if (sj.contains("origin")) sec.origin = detail::json_vec(sj["origin"], "section.origin");
  return synthetic_pullback(s, domain, sec);
}

Output run_decompose(const Common& c, const DecomposeFlags& f) {
  const Json cfg = load_config(c.config_path);
  detail::reject_unknown(cfg, {"command", "chart", "synthetic", "slice", "grid", "seed", "tol"}, "decompose config");
  if (cfg.contains("chart") == cfg.contains("synthetic"))
    throw UsageError("decompose needs exactly one of chart and synthetic");
  const double tol = resolve_tol(c, cfg);
  Json effective{{"tol", tol}, {"seed", resolve_seed(c, cfg)}};
  DecompositionReport r;
  auto grid_for = [&](const Box& domain) {
    if (f.grid && *f.grid < 1) throw UsageError("grid count must be at least 1");
    const GridSpec g = f.grid ? GridSpec::uniform(domain, *f.grid)
                              : parse_grid(cfg.contains("grid") ? cfg["grid"] : Json(3), domain);
    effective["grid"] = grid_json(g);
    return g;
  };
  if (cfg.contains("synthetic")) {
    if (cfg.contains("slice")) throw UsageError("slice is only valid with chart");
    const SyntheticPullback sp = parse_synthetic(cfg["synthetic"]);
    effective["synthetic"] = cfg["synthetic"];
    r = verify_composition(sp.f, sp.triple, grid_for(sp.f.domain()).points(), tol);
  } else {
    const ChartImmersion chart = parse_chart(cfg["chart"]);
    effective["chart"] = cfg["chart"];
    Vec rest = chart.domain().center().tail(std::max(0, chart.n() - 2));
    if (cfg.contains("slice")) rest = detail::json_vec(cfg["slice"], "slice");
    if (rest.size() != std::max(0, chart.n() - 2)) throw UsageError("slice needs n - 2 coordinates");
    effective["slice"] = to_json(rest);
    r = decompose(chart, rest, grid_for(chart.domain()).points(), tol);
  }
  Output out;
  out.json = report_envelope("decompose", effective);
  out.json["result"] = decomposition_json(r);
  out.csv = decomposition_csv(r);
  out.summary = decomposition_summary(r);
  out.exit_code = r.success() ? kExitOk : kExitFailure;
  return out;
}

void emit(const Common& c, const Output& o) {
  std::string text;
  if (c.format == "json") text = o.json.dump(2) + "\n";
  else if (c.format == "csv") text = o.csv;
  else text = o.summary;
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + c.out);
  f << text;
}

const char* kFooter = R"(Exit codes: 0 success, 1 verification failure, 2 usage or input error.
WINTGEN_THREADS caps the worker threads; results do not depend on it.

CSV columns (--format csv):
  fuzz          index,n,m,c,residual,injected,label,mu,gamma1,gamma2,error  (one row per equality hit)
  scan          x1..xn,residual,wintgen,label,nu,dim_n1,error
  gauss-verify  metric,value
  decompose     x1..xn,ok,wintgen,H,sigma,grad_norm,delta_norm_error,f_residual,xi_residual,
                normality,tangency,vertical_error,psi1,psi2,nullity_residual,trace_residual,error

Config files are JSON objects; unknown keys are rejected. Defaults: seed 0, tol 1e-8.
  fuzz          count (1000), inject (0), n_min (2), n_max (6), m_min (1), m_max (5)
  scan          chart, grid (32 per axis)
  gauss-verify  surface, tau, grid (5 per axis), fibers (8), directions (2)
  decompose     chart + slice (domain center) or synthetic {surface, tau, domain, section}, grid (3 per axis)
Charts: {"zoo": id, "params": {..}} | {"expr": [..], "vars": [..], "domain": {..}} | {"polynomial": [..], "domain": {..}},
optionally with "invert": {"center": [..], "radius": R}.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pointwise DDVV checks, Wintgen ideal classification, conformal Gauss parametrizations and "
               "decompositions"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "random seed (default 0)");
    sub->add_option("--tol", common.tol, "verification tolerance (default 1e-8)");
    sub->add_option("--out", common.out, "write the report here instead of stdout");
    sub->add_option("--format", common.format, "json, csv or summary")
        ->check(CLI::IsMember({"json", "csv", "summary"}));
  };

  FuzzFlags fuzz_flags;
  auto* fuzz = app.add_subcommand("fuzz", "random shape operators: DDVV residual >= -1e-12 and equality hits");
  add_common(fuzz);
  fuzz->add_option("--count", fuzz_flags.count, "number of configurations (>= 1)");
  fuzz->add_option("--inject", fuzz_flags.inject, "number of equality configurations mixed in");

  ScanFlags scan_flags;
  auto* scan = app.add_subcommand("scan", "per-point residual, case label, nullity and dim N1 over a grid");
  add_common(scan);
  scan->add_option("--chart", scan_flags.chart, "zoo id (overrides the config chart)");
  scan->add_option("--grid", scan_flags.grid, "points per axis");

  GaussFlags gauss_flags;
  auto* gauss = app.add_subcommand("gauss-verify", "invariant checks of the conformal Gauss parametrization");
  add_common(gauss);
  gauss->add_option("--grid", gauss_flags.grid, "base points per axis");
  gauss->add_option("--fibers", gauss_flags.fibers, "fiber samples per base point");
  gauss->add_option("--directions", gauss_flags.directions, "tangent directions per sample");

  DecomposeFlags dec_flags;
  auto* dec = app.add_subcommand("decompose", "center map, extraction of (g, tau, j) and verification of f = Psi(j)");
  add_common(dec);
  dec->add_option("--grid", dec_flags.grid, "verification points per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    Output out;
    if (*fuzz) out = run_fuzz(common, fuzz_flags);
    else if (*scan) out = run_scan(common, scan_flags);
    else if (*gauss) out = run_gauss(common, gauss_flags);
    else out = run_decompose(common, dec_flags);
    emit(common, out);
    return out.exit_code;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
