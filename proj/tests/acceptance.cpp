// Acceptance run: one PASS/FAIL line per criterion.
// usage: acceptance [path/to/wintgen path/to/configs]   (AC9 needs both)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <unistd.h>  // getpid
#include <vector>

#include "wintgen/chart_spec.hpp"
#include "wintgen/wintgen.hpp"

using namespace wintgen;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ScalarField constant_tau(double t) {
  return ScalarField("const", [t](const JetVector& x) { return constant_like(x[0], t); });
}

ChartImmersion sphere_chart(int dim, double radius) {
  ZooParams p;
  p.scalars["dim"] = dim;
  p.scalars["radius"] = radius;
  return zoo_chart("sphere", p);
}

PointConfig random_symmetric(std::mt19937_64& rng, int n, int m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PointConfig cfg;
  cfg.n = n;
  cfg.m = m;
  for (int a = 0; a < m; ++a) {
    Mat s(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) s(i, j) = s(j, i) = u(rng);
    cfg.A.push_back(s);
  }
  return cfg;
}

Vec uniform_vec(int dim, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = u(rng);
  return v;
}

std::vector<Vec> inner_grid(const Box& b, int k, double shrink = 0.9) {
  const Vec c = b.center();
  return GridSpec::uniform(Box{c + shrink * (b.lo - c), c + shrink * (b.hi - c)}, k).points();
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  FuzzOptions o;
  o.count = 100000;
  o.seed = 2024;
  const auto t0 = std::chrono::steady_clock::now();
  const FuzzReport r = ddvv_fuzz(o);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = r.violations == 0 && r.min_residual >= kViolationThreshold && secs <= 60.0;
  return {ok, "1e5 configs, violations " + std::to_string(r.violations) + ", min residual " + fmt(r.min_residual) +
                  ", " + fmt(secs) + " s"};
}

Outcome ac2() {
  std::size_t count = 0;
  double worst = 0.0;
  std::uint64_t seed = 1;
  for (int n = 3; n <= 6; ++n)
    for (int m = 2; m <= 5; ++m)
      for (double mu : {0.1, 0.5, 1.0, 2.0, 5.0})
        for (double g1 : {-2.0, -0.5, 0.0, 0.7, 3.0})
          for (double g2 : {-1.0, 0.0, 0.4, 2.0}) {
            const PointConfig cfg = make_equality_config(n, m, mu, g1, g2, seed++);
            worst = std::max(worst, std::abs(ddvv_residual(cfg)));
            ++count;
          }
  return {count >= 1000 && worst <= 1e-10, std::to_string(count) + " configs, max |residual| " + fmt(worst)};
}

Outcome ac3() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mag(0.2, 3.0), coin(0.0, 1.0);
  const CaseLabel cases[] = {CaseLabel::Generic, CaseLabel::Case1, CaseLabel::Case2Minimal, CaseLabel::Case3,
                             CaseLabel::Umbilical};
  int bad = 0, seen[5] = {0, 0, 0, 0, 0};
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const CaseLabel want = cases[t % 5];
    const int n = 3 + t % 4;
    const int m = 3 + (t / 5) % 3;
    auto sgn = [&] { return coin(rng) < 0.5 ? -1.0 : 1.0; };
    double mu = mag(rng), g1 = sgn() * mag(rng), g2 = sgn() * mag(rng);
    if (want == CaseLabel::Case1) g2 = 0.0;
    if (want == CaseLabel::Case3) g1 = 0.0;
    if (want == CaseLabel::Case2Minimal) g1 = g2 = 0.0;
    if (want == CaseLabel::Umbilical) mu = 0.0;
    PointConfig cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.A = canonical_shape_operators(n, m, mu, g1, g2);
    const std::uint64_t seed = 7000u + static_cast<std::uint64_t>(t);
    cfg = conjugate(cfg, random_rotation(n, seed), random_rotation(m, seed + 1));
    try {
      const NormalForm nf = wintgen_normal_form(cfg, kDefaultTol);
      double err;
      if (want == CaseLabel::Umbilical) {
        // only |H| survives: all of it sits in the last slot
        err = std::max(std::abs(nf.mu), std::abs(std::hypot(nf.gamma1, nf.gamma2) - std::hypot(g1, g2)));
      } else {
        err = std::max({std::abs(nf.mu - mu), std::abs(std::abs(nf.gamma1) - std::abs(g1)),
                        std::abs(std::abs(nf.gamma2) - std::abs(g2))});
      }
      worst = std::max(worst, err);
      if (err > 1e-8 || nf.label != want) ++bad;
      else ++seen[t % 5];
    } catch (const GeometryError&) {
      ++bad;
    }
  }
  bool all_cases = true;
  for (int s : seen) all_cases = all_cases && s > 0;
  return {bad == 0 && all_cases, "1000 trials over 5 labels, failures " + std::to_string(bad) +
                                     ", max parameter error " + fmt(worst)};
}

Outcome ac4() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int disagree = 0, ideal = 0;
  for (int t = 0; t < 10000; ++t) {
    PointConfig cfg;
    const int kind = t % 10;
    if (kind < 4) {
      cfg = random_symmetric(rng, 2 + t % 5, 1 + (t / 10) % 5);
    } else if (kind < 8) {
      cfg = make_equality_config(3 + t % 4, 2 + (t / 10) % 4, u(rng), u(rng), u(rng), 20000u + t);
    } else if (kind == 8) {
      const int n = 2 + t % 5, m = 1 + (t / 10) % 5;
      cfg.n = n;
      cfg.m = m;
      for (int a = 0; a < m; ++a) cfg.A.push_back(u(rng) * Mat::Identity(n, n));
    } else {
      // equality config nudged off the equality set, clear of the sqrt(tol) boundary band
      cfg = make_equality_config(3 + t % 4, 2 + (t / 10) % 4, 1.0 + std::abs(u(rng)), u(rng), u(rng), 30000u + t);
      cfg.A[0](0, 0) += 1e-2;
    }
    const bool w = is_wintgen_ideal(cfg, kDefaultTol);
    const bool lh = lemma_h_criterion(cfg, kDefaultTol);
    bool nf_ok = true;
    try {
      wintgen_normal_form(cfg, kDefaultTol);
    } catch (const GeometryError&) {
      nf_ok = false;
    }
    disagree += !(w == lh && w == nf_ok);
    ideal += w;
  }
  return {disagree == 0, "1e4 configs (" + std::to_string(ideal) + " Wintgen ideal), disagreements " +
                             std::to_string(disagree)};
}

Outcome ac5() {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dn(3, 6), dm(2, 5);
  std::uniform_real_distribution<double> par(-2.0, 2.0), rad(0.3, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int n = dn(rng), m = dm(rng);
    const std::uint64_t seed = 40000u + static_cast<std::uint64_t>(k);
    const PointConfig cfg =
        attach_random_ambient(make_equality_config(n, m, std::abs(par(rng)) + 0.05, par(rng), par(rng), seed), seed + 7);
    const PointConfig inv = invert_point_config(cfg, InversionSpec{uniform_vec(n + m, rng, -2, 2), rad(rng)});
    worst = std::max(worst, std::abs(ddvv_residual(inv)));
  }
  int case1 = 0, generic = 0;
  for (int k = 0; k < 50; ++k) {
    const std::uint64_t seed = 50000u + static_cast<std::uint64_t>(k);
    const PointConfig cfg = attach_random_ambient(make_equality_config(4, 3, 1.0, 0.8, 0.0, seed), seed + 7);
    if (wintgen_normal_form(cfg, kDefaultTol).label != CaseLabel::Case1) continue;
    ++case1;
    const PointConfig inv = invert_point_config(cfg, InversionSpec{uniform_vec(7, rng, -2, 2), 1.3});
    generic += wintgen_normal_form(inv, kDefaultTol).label == CaseLabel::Generic;
  }
  return {worst <= 1e-8 && generic >= 1,
          "1000 inversions, max |residual| " + fmt(worst) + "; Case1 -> Generic " + std::to_string(generic) + "/" +
              std::to_string(case1)};
}

Outcome ac6() {
  const ScalarField varying = parse_scalar_field(Json("0.35 + 0.05*sin(u)*cos(v) + 0.03*v"), 2);
  const std::vector<ChartImmersion> surfaces = {sphere_chart(4, 1.0), zoo_chart("holomorphic-z2"),
                                                zoo_chart("graph-generic"), zoo_chart("clifford-torus")};
  double dpsi = 0.0, pairing = 0.0, vertical = 0.0;
  std::size_t min_pairs = ~std::size_t{0};
  bool clean = true;
  for (const auto& g : surfaces)
    for (const ScalarField& tau : {constant_tau(0.3), varying}) {
      const SupportedSurface s{g, tau};
      const GaussVerifyReport r = verify_gauss(s, inner_grid(g.domain(), 6), 8, 2, 6);
      dpsi = std::max(dpsi, r.max_dpsi_discrepancy);
      pairing = std::max(pairing, r.max_normal_pairing);
      vertical = std::max(vertical, r.max_vertical_error);
      min_pairs = std::min(min_pairs, r.directions);
      clean = clean && r.stats.errors == 0;
    }
  // focal parameter of the radial normal on spheres of radius r
  double focal = 0.0;
  const Vec y = (Vec(2) << 0.3, -0.2).finished();
  for (double r : {0.5, 1.0, 2.5}) {
    const ChartImmersion g = sphere_chart(4, r);
    const SupportedSurface s{g, constant_tau(1.0)};
    const FramedPoint fp = frame_at(g, y);
    const BundlePoint p = bundle_point(s, y, fp.normal.transpose() * fp.position.normalized());
    focal = std::max(focal, std::abs(focal_constant_tau(g, p, 0.1, 2 * r + 0.3) - r));
  }
  const bool ok = clean && min_pairs >= 500 && dpsi <= 1e-9 && pairing <= 1e-9 && vertical <= 1e-8 && focal <= 1e-6;
  return {ok, "4 surfaces x 2 tau, >= " + std::to_string(min_pairs) + " pairs each, dPsi " + fmt(dpsi) +
                  ", <dPsi,N> " + fmt(pairing) + ", vertical " + fmt(vertical) + ", focal parameter error " +
                  fmt(focal)};
}

Outcome ac7() {
  double worst = 0.0;
  int errors = 0;
  for (const char* id : {"holomorphic-z2", "holomorphic-z3"}) {
    const ChartImmersion f = zoo_chart(id);
    if (f.N() != 4) return {false, std::string(id) + " is not in R^4"};
    const ScanReport r = ddvv_scan(f, GridSpec::uniform(f.domain(), 32), kDefaultTol);
    worst = std::max(worst, r.max_abs_residual);
    if (auto it = r.histogram.find("Error"); it != r.histogram.end()) errors += it->second;
  }
  return {errors == 0 && worst <= 1e-8, "2 charts x 32x32, max |residual| " + fmt(worst)};
}

Outcome ac8() {
  std::string detail;
  bool ok = true;

  const ChartImmersion f = zoo_chart("wintgen-generic");
  const DecompositionReport rep =
      decompose(f, f.domain().center().tail(f.n() - 2), inner_grid(f.domain(), 3));
  ok = ok && rep.success() && rep.summary.worst() <= 1e-6;
  detail += "extracted " + std::to_string(rep.summary.passed) + "/" + std::to_string(rep.summary.records) +
            " worst " + fmt(rep.summary.worst());

  // non-Wintgen pullbacks through their known triple
  ZooParams sp;
  sp.scalars["dim"] = 6;
  sp.scalars["radius"] = 1.5;
  const ChartImmersion sphere6 = zoo_chart("sphere", sp);
  const ChartImmersion z2z3 = zoo_chart("holomorphic-z2z3");
  const ScalarField varying = parse_scalar_field(Json("0.25 + 0.05*sin(u)*cos(v) + 0.02*u"), 2);
  double synth = 0.0;
  std::size_t synth_fail = 0;
  for (const auto& [g, tau, shift] : {std::tuple{sphere6, constant_tau(0.3), true}, std::tuple{sphere6, varying, true},
                                      std::tuple{z2z3, constant_tau(0.2), false}, std::tuple{z2z3, varying, false}}) {
    const int m = g.N() - 2, n = 4;
    SectionSpec sec;
    sec.s0 = Vec::Unit(m, 0);
    sec.slope_y = Mat::Zero(m, 2);
    sec.slope_y(1, 0) = 0.3;
    sec.slope_y(m - 1, 1) = -0.2;
    sec.slope_t = Mat::Zero(m, n - 2);
    for (int k = 0; k < n - 2; ++k) sec.slope_t(1 + k, k) = 0.8;
    Vec lo(n), hi(n);
    lo << -0.3, -0.3, -0.4, -0.4;
    hi << 0.3, 0.3, 0.4, 0.4;
    if (shift) {
      lo.head(2) << 0.2, -0.5;
      hi.head(2) << 0.8, 0.1;
    }
    const SyntheticPullback pb = synthetic_pullback(SupportedSurface{g, tau}, Box{lo, hi}, sec);
    const DecompositionReport r = verify_composition(pb.f, pb.triple, inner_grid(pb.f.domain(), 3));
    synth = std::max(synth, r.summary.worst());
    synth_fail += r.summary.failed + r.summary.errors;
  }
  ok = ok && synth_fail == 0 && synth <= 1e-6;
  detail += "; 4 synthetic pullbacks worst " + fmt(synth);

  double residual = 0.0;
  int not_generic = 0;
  for (int i = 1; i <= 10; ++i)
    for (int j = 1; j <= 10; ++j)
      for (int k = 1; k <= 5; ++k) {
        const double k1 = 0.3 * i + 0.1, k2 = k1 * j / 11.0, h = 0.4 * k;
        const ConverseAssembly a = assemble_converse_pointwise(k1, k2, h, 4 + (i + j) % 3, 3 + (j + k) % 3);
        residual = std::max(residual, std::abs(a.residual));
        not_generic += a.nf.label != CaseLabel::Generic;
      }
  ok = ok && residual <= 1e-10 && not_generic == 0;
  detail += "; converse 500 grid points max |residual| " + fmt(residual) + ", non-Generic " +
            std::to_string(not_generic);
  return {ok, detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome ac9(const std::string& cli, const std::string& configs) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("wintgen-ac9-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"fuzz", "fuzz --count 5000 --inject 20"},
      {"scan", "scan --config " + configs + "/scan_holomorphic.json"},
      {"gauss", "gauss-verify --config " + configs + "/gauss_varying.json"},
      {"decompose", "decompose --config " + configs + "/decompose_generic.json"},
      {"synthetic", "decompose --config " + configs + "/decompose_synthetic.json"}};
  int mismatches = 0;
  for (const auto& [name, args] : runs) {
    std::string text[2];
    int code[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / (name + std::to_string(rep) + ".json");
      const std::string cmd = "WINTGEN_THREADS=" + std::string(rep == 0 ? "1" : "3") + " \"" + cli + "\" " + args +
                              " --seed 17 --out \"" + out.string() + "\" > /dev/null 2>&1";
      code[rep] = std::system(cmd.c_str());
      text[rep] = slurp(out);
    }
    if (text[0].empty() || text[0] != text[1] || code[0] != code[1]) ++mismatches;
  }
  fs::remove_all(dir);
  return {mismatches == 0, std::to_string(runs.size()) + " commands run twice (1 and 3 threads), mismatches " +
                               std::to_string(mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::string configs = argc > 2 ? argv[2] : "";
  struct Entry {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8},
      {"AC9", [&] {
         if (cli.empty() || configs.empty()) return Outcome{false, "needs the CLI path and the configs directory"};
         return ac9(cli, configs);
       }}};
  int failed = 0;
  for (const auto& e : entries) {
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    failed += !o.pass;
    std::cout << e.name << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
