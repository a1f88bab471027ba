#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wintgen/chart_spec.hpp"
#include "wintgen/decomposition.hpp"
#include "wintgen/zoo.hpp"

using namespace wintgen;

namespace {

ScalarField constant_tau(double t) {
  return ScalarField("const", [t](const JetVector& x) { return constant_like(x[0], t); });
}

SupportedSurface generic_support() {
  const auto s = wintgen_generic_support();
  return SupportedSurface{s.g, s.tau};
}

Vec slice_rest(const ChartImmersion& f) { return f.domain().center().tail(f.n() - 2); }

std::vector<Vec> grid(const Box& b, int k, double shrink = 0.9) {
  const Vec c = b.center();
  const Box inner{c + shrink * (b.lo - c), c + shrink * (b.hi - c)};
  return GridSpec::uniform(inner, k).points();
}

// Round 4-sphere of radius r in R^5 through inverse stereographic projection.
ChartImmersion round_s4(double r) {
  const std::string e = "(1+x1^2+x2^2+x3^2+x4^2)";
  const std::string rs = std::to_string(r);
  Json j;
  j["expr"] = {"2*" + rs + "*x1/" + e, "2*" + rs + "*x2/" + e, "2*" + rs + "*x3/" + e, "2*" + rs + "*x4/" + e,
               rs + "*(x1^2+x2^2+x3^2+x4^2-1)/" + e};
  j["domain"] = {{"min", {-0.5, -0.5, -0.5, -0.5}}, {"max", {0.5, 0.5, 0.5, 0.5}}};
  j["label"] = "round-s4";
  return parse_chart(j);
}

}  // namespace

// ---------------------------------------------------------------------------
// center map and nullity

TEST(CenterMap, UmbilicalSphereCollapsesToCenter) {
  ZooParams p;
  p.scalars["radius"] = 1.7;
  p.vectors["center"] = {0.5, -1.0, 2.0, 0.25, 0.0, 3.0};
  const ChartImmersion f = zoo_chart("umbilical-sphere-r6", p);
  const Vec c = Eigen::Map<const Vec>(p.vectors["center"].data(), 6);
  for (const Vec& x : grid(f.domain(), 3)) EXPECT_LT((center_map(f, x) - c).norm(), 1e-9);
}

TEST(CenterMap, RejectsNonWintgenAndMinimalPoints) {
  const ChartImmersion g = zoo_chart("graph-generic");
  const Vec x = (Vec(2) << 0.3, -0.2).finished();
  ASSERT_FALSE(is_wintgen_ideal(second_fundamental_form_at(g, x), kDefaultTol));
  try {
    center_map(g, x);
    FAIL() << "expected NotWintgenIdeal";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotWintgenIdeal);
  }
  try {
    center_map(zoo_chart("holomorphic-z2"), x);
    FAIL() << "expected MinimalPoint";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MinimalPoint);
  }
}

TEST(CenterMap, MatchesClosedFormCentersOfWintgenGeneric) {
  const ChartImmersion f = zoo_chart("wintgen-generic");
  const SupportedSurface s = generic_support();
  for (const Vec& x : grid(f.domain(), 3)) {
    EXPECT_LT((center_map(f, x) - s.g.value(x.head(2))).norm(), 1e-8);
    const FramedPoint fp = frame_at(f, x);
    EXPECT_NEAR(1.0 / std::sqrt(mean_curvature_sq(fp.cfg)), s.tau.value(x.head(2)), 1e-8);
  }
}

TEST(CenterMap, ConstantAlongTracedKernelDirections) {
  const ChartImmersion f = zoo_chart("wintgen-generic");
  for (const Vec& x0 : grid(f.domain(), 2, 0.5)) {
    // follow a unit-speed curve tangent to E with small Euler steps
    Vec x = x0;
    const Vec h0 = center_map(f, x);
    double length = 0.0;
    for (int step = 0; step < 20; ++step) {
      const NullityInfo e = nullity_distribution(f, x);
      const Vec t = e.chart_basis.col(0);
      x += 0.01 * t;
      length += 0.01;
    }
    EXPECT_LT((center_map(f, x) - h0).norm() / length, 1e-6);
  }
}

TEST(Nullity, KernelIsTheTrailingCoordinatesWithSphericalLeaves) {
  const ChartImmersion f = zoo_chart("wintgen-generic");
  for (const Vec& x : grid(f.domain(), 3)) {
    const NullityInfo e = nullity_distribution(f, x);
    ASSERT_EQ(e.frame_basis.cols(), 2);
    // chart directions of E have no (x1, x2) component
    EXPECT_LT(e.chart_basis.topRows(2).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT(e.h_variation, 1e-6);
    EXPECT_LT(e.H_variation, 1e-6);
    EXPECT_LT(e.parallel_defect, 1e-6);
    EXPECT_LT((e.ambient_basis.transpose() * e.ambient_basis - Mat::Identity(2, 2)).norm(), 1e-10);
  }
}

TEST(Nullity, RejectsSmallDimensionsAndNonWintgen) {
  ZooParams p;
  p.scalars["n"] = 3;
  const ChartImmersion f3 = zoo_chart("wintgen-generic", p);
  const Vec x = Vec::Zero(3);
  for (auto call : {+[](const ChartImmersion& f, const Vec& y) { nullity_distribution(f, y); },
                    +[](const ChartImmersion& f, const Vec& y) { extract_pair(f, y.tail(1)); }}) {
    try {
      call(f3, x);
      FAIL() << "expected DimensionTooSmall";
    } catch (const GeometryError& e) {
      EXPECT_EQ(e.kind(), ErrorKind::DimensionTooSmall);
    }
  }
  const ChartImmersion rotated = parse_chart(Json::parse(
      R"({"expr": ["x1", "x2", "x3", "x4", "x1^2 + 2*x2^2 + 3*x3^2 + 4*x4^2", "x1*x2"],
          "domain": {"min": [-1, -1, -1, -1], "max": [1, 1, 1, 1]}})"));
  try {
    nullity_distribution(rotated, Vec::Constant(4, 0.1));
    FAIL() << "expected NotWintgenIdeal";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotWintgenIdeal);
  }
}

// ---------------------------------------------------------------------------
// extraction and verification

TEST(Extract, RecoversClosedFormSupport) {
  const ChartImmersion f = zoo_chart("wintgen-generic");
  const ExtractedPair pair = extract_pair(f, slice_rest(f));
  EXPECT_LT(pair.max_adapted_angle, 1e-6);
  const SupportedSurface truth = generic_support();
  for (const Vec& y : grid(pair.surface.g.domain(), 5)) {
    EXPECT_LT((pair.surface.g.value(y) - truth.g.value(y)).norm(), 1e-6);
    EXPECT_NEAR(pair.surface.tau.value(y), truth.tau.value(y), 1e-6);
    EXPECT_LT((pair.surface.g.jacobian(y) - truth.g.jacobian(y)).norm(), 1e-6);
    const JetVector a = pair.surface.g.taylor(y, 2), b = truth.g.taylor(y, 2);
    for (std::size_t c = 0; c < a.size(); ++c)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(a[c].d2(i, j), b[c].d2(i, j), 1e-6);
  }
}

TEST(Extract, SectionAgreesWithClosedFormSection) {
  const ChartImmersion f = zoo_chart("wintgen-generic");
  const ExtractedPair pair = extract_pair(f, slice_rest(f));
  const CompositionTriple truth = chart_triple(f, generic_support());
  for (const Vec& x : grid(f.domain(), 3)) {
    const SectionSample a = pair.triple.j(x), b = truth.j(x);
    EXPECT_LT((a.point.w - b.point.w).norm(), 1e-6);
    EXPECT_LT(a.delta_norm_error, 1e-7);
    EXPECT_LT(a.grad_norm, 1.0);
  }
}

TEST(Verify, ClosedFormTripleSatisfiesEveryIdentity) {
  const ChartImmersion f = zoo_chart("wintgen-generic");
  const DecompositionReport rep = verify_composition(f, chart_triple(f, generic_support()), grid(f.domain(), 3));
  EXPECT_EQ(rep.summary.errors, 0u);
  EXPECT_EQ(rep.summary.passed, rep.summary.records);
  EXPECT_EQ(rep.summary.wintgen, rep.summary.records);
  EXPECT_LT(rep.summary.worst(), 1e-6);
  EXPECT_LT(rep.summary.max_grad_norm, 1.0);
}

TEST(Verify, ExtractedPipelineReproducesTheChart) {
  const ChartImmersion f = zoo_chart("wintgen-generic");
  const DecompositionReport rep = decompose(f, slice_rest(f), grid(f.domain(), 3));
  ASSERT_TRUE(rep.gate_passed) << rep.reason << " " << rep.message;
  EXPECT_TRUE(rep.success());
  EXPECT_EQ(rep.summary.records, 81u);
  EXPECT_LT(rep.summary.worst(), 1e-6);
  for (const auto& r : rep.records) {
    EXPECT_TRUE(r.wintgen);
    EXPECT_NEAR(r.sigma * r.H, 1.0, 1e-12);
  }
}

TEST(Verify, CorruptedTauIsDetected) {
  const ChartImmersion f = zoo_chart("wintgen-generic");
  const SupportedSurface s = generic_support();
  const ScalarField shifted("shifted", [s](const JetVector& y) { return s.tau(y) + 1e-3; });
  const SupportedSurface bad{s.g, shifted};
  const DecompositionReport rep = verify_composition(f, chart_triple(f, bad), grid(f.domain(), 2));
  EXPECT_EQ(rep.summary.errors, 0u);
  EXPECT_GT(rep.summary.max_f_residual, 1e-4);
  EXPECT_EQ(rep.summary.passed, 0u);
}

TEST(Verify, MisalignedChartIsNotAdapted) {
  const ChartImmersion f = zoo_chart("wintgen-generic");
  const double a = 0.1;
  const ChartImmersion rotated = reparametrize(
      f, Box{Vec::Constant(4, -0.3), Vec::Constant(4, 0.3)},
      [a](const JetVector& x) {
        JetVector y = x;
        y[0] = std::cos(a) * x[0] - std::sin(a) * x[2];
        y[2] = std::sin(a) * x[0] + std::cos(a) * x[2];
        return y;
      },
      "rotated");
  try {
    extract_pair(rotated, Vec::Zero(2));
    FAIL() << "expected NotAdapted";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAdapted);
  }
  const DecompositionReport rep = decompose(rotated, Vec::Zero(2), grid(rotated.domain(), 2));
  EXPECT_FALSE(rep.gate_passed);
  EXPECT_EQ(rep.reason, "NotAdapted");
}

TEST(Verify, UmbilicalAndSmallDimensionChartsAreGatedOut) {
  const ChartImmersion s4 = round_s4(2.0);
  const DecompositionReport rep = decompose(s4, Vec::Zero(2), grid(s4.domain(), 2));
  EXPECT_FALSE(rep.gate_passed);
  EXPECT_EQ(rep.reason, "MinimalOrUmbilical");
  EXPECT_FALSE(rep.success());
  const ChartImmersion r6 = zoo_chart("umbilical-sphere-r6");
  const DecompositionReport rep3 = decompose(r6, Vec::Zero(1), grid(r6.domain(), 2));
  EXPECT_EQ(rep3.reason, "DimensionTooSmall");
}

// ---------------------------------------------------------------------------
// synthetic pullbacks from zoo surfaces

namespace {

struct SyntheticCase {
  std::string name;
  SupportedSurface s;
};

std::vector<SyntheticCase> synthetic_cases() {
  ZooParams sp;
  sp.scalars["dim"] = 6;
  sp.scalars["radius"] = 1.5;
  const ChartImmersion sphere6 = zoo_chart("sphere", sp);
  const ChartImmersion z2z3 = zoo_chart("holomorphic-z2z3");
  const ScalarField varying = parse_scalar_field(Json("0.25 + 0.05*sin(u)*cos(v) + 0.02*u"), 2);
  return {{"sphere6-const", {sphere6, constant_tau(0.3)}},
          {"sphere6-varying", {sphere6, varying}},
          {"z2z3-const", {z2z3, constant_tau(0.2)}},
          {"z2z3-varying", {z2z3, varying}}};
}

SectionSpec section_for(int m, int n) {
  SectionSpec sec;
  sec.s0 = Vec::Zero(m);
  sec.s0(0) = 1.0;
  sec.slope_y = Mat::Zero(m, 2);
  sec.slope_y(1, 0) = 0.3;
  sec.slope_y(m - 1, 1) = -0.2;
  sec.slope_t = Mat::Zero(m, n - 2);
  for (int k = 0; k < n - 2; ++k) sec.slope_t(1 + k, k) = 0.8;
  return sec;
}

}  // namespace

TEST(Synthetic, PullbackReproducesItselfWithVerticalCurvature) {
  for (const auto& c : synthetic_cases()) {
    SCOPED_TRACE(c.name);
    const int m = c.s.g.N() - 2;
    const int n = 4;
    Vec lo(n), hi(n);
    lo << -0.3, -0.3, -0.4, -0.4;
    hi << 0.3, 0.3, 0.4, 0.4;
    if (c.name.rfind("sphere6", 0) == 0) {
      lo.head(2) << 0.2, -0.5;
      hi.head(2) << 0.8, 0.1;
    }
    const SyntheticPullback sp = synthetic_pullback(c.s, Box{lo, hi}, section_for(m, n));
    EXPECT_EQ(sp.f.max_order(), 2);
    const DecompositionReport rep = verify_composition(sp.f, sp.triple, grid(sp.f.domain(), 3));
    EXPECT_EQ(rep.summary.errors, 0u);
    EXPECT_EQ(rep.summary.passed, rep.summary.records);
    EXPECT_LT(rep.summary.max_f_residual, 1e-9);
    EXPECT_LT(rep.summary.max_normality, 1e-8);
    EXPECT_LT(rep.summary.max_tangency, 1e-6);
    EXPECT_LT(rep.summary.max_vertical_error, 1e-6);
    // the Wintgen-only identities are gated off for these sections
    for (const auto& r : rep.records)
      if (!r.wintgen) EXPECT_EQ(r.psi1 + r.psi2 + r.trace_residual + r.nullity_residual + r.xi_residual, 0.0);
  }
}

TEST(Synthetic, PullbackJetsMatchDifferencesOfValues) {
  const auto c = synthetic_cases()[3];
  const int m = c.s.g.N() - 2;
  const SyntheticPullback sp = synthetic_pullback(
      c.s, Box{Vec::Constant(4, -0.3), Vec::Constant(4, 0.3)}, section_for(m, 4));
  const Vec x = (Vec(4) << 0.1, -0.05, 0.2, -0.1).finished();
  const Mat j = sp.f.jacobian(x);
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    const Vec e = Vec::Unit(4, i) * h;
    const Vec d = (sp.f.value(x + e) - sp.f.value(x - e)) / (2 * h);
    EXPECT_LT((d - j.col(i)).norm(), 1e-7);
  }
}

// ---------------------------------------------------------------------------
// pointwise converse

TEST(Converse, WorkedExample) {
  const ConverseAssembly a = assemble_converse_pointwise(2.0, 1.0, 1.0, 4, 3);
  EXPECT_NEAR(a.gamma1, std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_NEAR(a.gamma2, 0.5, 1e-15);
  EXPECT_NEAR(a.residual, 0.0, 1e-10);
  EXPECT_NEAR(a.nf.mu, 2.0, 1e-10);
  EXPECT_EQ(a.nf.label, CaseLabel::Generic);
  // |H_f|^2 = gamma1^2 + gamma2^2 = H^2
  EXPECT_NEAR(mean_curvature_sq(a.cfg), 1.0, 1e-14);
  // alpha(e1, e2) = kappa1 eta2
  EXPECT_NEAR(a.cfg.A[1](0, 1), 2.0, 0.0);
  EXPECT_NEAR(a.cfg.A[0](0, 1), 0.0, 0.0);
}

TEST(Converse, Errors) {
  auto kind_of = [](auto call) {
    try {
      call();
    } catch (const GeometryError& e) {
      return e.kind();
    }
    return ErrorKind::InvalidInput;
  };
  EXPECT_EQ(kind_of([] { assemble_converse_pointwise(1.0, 1.0, 1.0, 4, 3); }), ErrorKind::DegenerateEllipse);
  EXPECT_EQ(kind_of([] { assemble_converse_pointwise(1.0, 2.0, 1.0, 4, 3); }), ErrorKind::DegenerateEllipse);
  EXPECT_EQ(kind_of([] { assemble_converse_pointwise(1.0, 0.0, 1.0, 4, 3); }), ErrorKind::NotGeneric);
  EXPECT_EQ(kind_of([] { assemble_converse_pointwise(2.0, 1.0, 0.0, 4, 3); }), ErrorKind::NotGeneric);
  EXPECT_EQ(kind_of([] { assemble_converse_pointwise(2.0, 1.0, 1.0, 3, 3); }), ErrorKind::DimensionTooSmall);
  EXPECT_EQ(kind_of([] { assemble_converse_pointwise(2.0, 1.0, 1.0, 4, 2); }), ErrorKind::DimensionError);
}

TEST(Converse, GridRoundTripThroughRotatedFrames) {
  std::size_t count = 0;
  for (int i = 1; i <= 10; ++i)
    for (int j = 1; j <= 10; ++j)
      for (int k = 1; k <= 5; ++k) {
        const double k1 = 0.3 * i + 0.1;
        const double k2 = k1 * j / 11.0;
        const double h = 0.4 * k;
        const int n = 4 + (i + j) % 3, m = 3 + (j + k) % 3;
        const ConverseAssembly a = assemble_converse_pointwise(k1, k2, h, n, m);
        ASSERT_LE(std::abs(a.residual), 1e-10);
        ASSERT_EQ(a.nf.label, CaseLabel::Generic);
        const std::uint64_t seed = 1000u * i + 10u * j + k;
        const PointConfig rot = conjugate(a.cfg, random_rotation(n, seed), random_rotation(m, seed + 7));
        const NormalForm nf = wintgen_normal_form(rot, kDefaultTol);
        EXPECT_NEAR(nf.mu, k1, 1e-8);
        EXPECT_NEAR(std::abs(nf.gamma1), h / k1 * std::sqrt(k1 * k1 - k2 * k2), 1e-8);
        EXPECT_NEAR(std::abs(nf.gamma2), h * k2 / k1, 1e-8);
        ++count;
      }
  EXPECT_EQ(count, 500u);
}
