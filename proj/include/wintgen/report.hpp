#pragma once

/**
 * @file report.hpp
 * @brief JSON, CSV and text renderings of the run reports. JSON documents
 *        carry "schema": 1 and contain no timestamps or host data, so equal
 *        inputs give byte-identical output.
 */

#include <cstdio>
#include <sstream>
#include <string>

#include "wintgen/chart_spec.hpp"
#include "wintgen/decomposition.hpp"
#include "wintgen/fuzz.hpp"
#include "wintgen/gaussparam.hpp"
#include "wintgen/immersion.hpp"

namespace wintgen {

inline constexpr int kReportSchema = 1;
inline constexpr const char* kToolVersion = "1.0.0";

inline Json report_envelope(const std::string& command, const Json& config) {
  return Json{{"schema", kReportSchema},
              {"command", command},
              {"metadata", {{"tool", "wintgen"}, {"version", kToolVersion}}},
              {"config", config}};
}

inline Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json to_json(const NormalForm& nf) {
  return Json{{"label", std::string(to_string(nf.label))},
              {"mu", nf.mu},
              {"gamma1", nf.gamma1},
              {"gamma2", nf.gamma2}};
}

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string coords_header(int n) {
  std::string h;
  for (int i = 1; i <= n; ++i) h += "x" + std::to_string(i) + ",";
  return h;
}

inline std::string coords(const Vec& x) {
  std::string s;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += num(x(i)) + ",";
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// fuzz

inline Json fuzz_json(const FuzzReport& r) {
  Json hits = Json::array();
  for (const auto& h : r.hits) {
    Json j{{"index", h.index}, {"n", h.n}, {"m", h.m}, {"c", h.c}, {"residual", h.residual}, {"injected", h.injected}};
    if (h.nf) j["normal_form"] = to_json(*h.nf);
    if (!h.error.empty()) j["error"] = h.error;
    hits.push_back(j);
  }
  return Json{{"count", r.options.count},
              {"violations", r.violations},
              {"min_residual", r.min_residual},
              {"min_index", r.min_index},
              {"injected", r.injected},
              {"equality_hits", r.hits.size()},
              {"hits", hits}};
}

/// One row per equality hit.
inline std::string fuzz_csv(const FuzzReport& r) {
  std::ostringstream out;
  out << "index,n,m,c,residual,injected,label,mu,gamma1,gamma2,error\n";
  for (const auto& h : r.hits) {
    out << h.index << ',' << h.n << ',' << h.m << ',' << detail::num(h.c) << ',' << detail::num(h.residual) << ','
        << (h.injected ? 1 : 0) << ',';
    if (h.nf)
      out << to_string(h.nf->label) << ',' << detail::num(h.nf->mu) << ',' << detail::num(h.nf->gamma1) << ','
          << detail::num(h.nf->gamma2);
    else out << ",,,";
    out << ',' << h.error << '\n';
  }
  return out.str();
}

inline std::string fuzz_summary(const FuzzReport& r) {
  std::ostringstream out;
  out << "configs: " << r.options.count << "\nviolations: " << r.violations
      << "\nmin residual: " << detail::num(r.min_residual) << " (index " << r.min_index << ")"
      << "\ninjected equality configs: " << r.injected << "\nequality hits: " << r.hits.size() << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// scan

inline Json scan_json(const ScanReport& r) {
  Json recs = Json::array();
  for (const auto& s : r.records) {
    Json j{{"x", to_json(s.x)}, {"ok", s.ok}};
    if (s.ok) {
      j["residual"] = s.residual;
      j["wintgen"] = s.wintgen;
      j["label"] = s.label ? std::string(to_string(*s.label)) : std::string("NotWintgen");
      j["nu"] = s.nu;
      j["dim_n1"] = s.dim_n1;
    } else {
      j["error"] = s.error;
    }
    recs.push_back(j);
  }
  Json hist = Json::object();
  for (const auto& [k, v] : r.histogram) hist[k] = v;
  return Json{{"points", r.records.size()}, {"max_abs_residual", r.max_abs_residual}, {"histogram", hist},
              {"records", recs}};
}

inline std::string scan_csv(const ScanReport& r) {
  std::ostringstream out;
  const int n = r.records.empty() ? 0 : static_cast<int>(r.records[0].x.size());
  out << detail::coords_header(n) << "residual,wintgen,label,nu,dim_n1,error\n";
  for (const auto& s : r.records) {
    out << detail::coords(s.x);
    if (s.ok)
      out << detail::num(s.residual) << ',' << (s.wintgen ? 1 : 0) << ','
          << (s.label ? std::string(to_string(*s.label)) : std::string("NotWintgen")) << ',' << s.nu << ','
          << s.dim_n1 << ",\n";
    else out << ",,,,," << s.error << '\n';
  }
  return out.str();
}

inline std::string scan_summary(const ScanReport& r) {
  std::ostringstream out;
  out << "points: " << r.records.size() << "\nmax |residual|: " << detail::num(r.max_abs_residual) << '\n';
  for (const auto& [k, v] : r.histogram) out << "  " << k << ": " << v << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// gauss-verify

inline Json gauss_json(const GaussVerifyReport& r) {
  Json irregular = Json::array();
  for (const auto& y : r.irregular_bases) irregular.push_back(to_json(y));
  return Json{{"samples",
               {{"total", r.stats.total},
                {"accepted", r.stats.accepted},
                {"irregular", r.stats.irregular},
                {"marginal", r.stats.marginal},
                {"gradient_too_large", r.stats.gradient_too_large},
                {"errors", r.stats.errors},
                {"rejected_fraction", r.stats.rejected_fraction()}}},
              {"directions", r.directions},
              {"max_dpsi_discrepancy", r.max_dpsi_discrepancy},
              {"max_normal_pairing", r.max_normal_pairing},
              {"max_unit_error", r.max_unit_error},
              {"max_vertical_error", r.max_vertical_error},
              {"max_shape_asymmetry", r.max_shape_asymmetry},
              {"max_vertical_block_error", r.max_vertical_block_error},
              {"max_lsq_residual", r.max_lsq_residual},
              {"worst", r.worst()},
              {"irregular_bases", irregular},
              {"warnings", r.warnings}};
}

/// Two columns: metric name and value.
inline std::string gauss_csv(const GaussVerifyReport& r) {
  std::ostringstream out;
  out << "metric,value\n";
  const std::pair<const char*, double> rows[] = {
      {"samples_total", static_cast<double>(r.stats.total)},
      {"samples_accepted", static_cast<double>(r.stats.accepted)},
      {"samples_irregular", static_cast<double>(r.stats.irregular)},
      {"samples_marginal", static_cast<double>(r.stats.marginal)},
      {"samples_gradient_too_large", static_cast<double>(r.stats.gradient_too_large)},
      {"samples_errors", static_cast<double>(r.stats.errors)},
      {"directions", static_cast<double>(r.directions)},
      {"max_dpsi_discrepancy", r.max_dpsi_discrepancy},
      {"max_normal_pairing", r.max_normal_pairing},
      {"max_unit_error", r.max_unit_error},
      {"max_vertical_error", r.max_vertical_error},
      {"max_shape_asymmetry", r.max_shape_asymmetry},
      {"max_vertical_block_error", r.max_vertical_block_error},
      {"max_lsq_residual", r.max_lsq_residual}};
  for (const auto& [k, v] : rows) out << k << ',' << detail::num(v) << '\n';
  return out.str();
}

inline std::string gauss_summary(const GaussVerifyReport& r) {
  std::ostringstream out;
  out << "samples: " << r.stats.accepted << " accepted of " << r.stats.total << " (irregular "
      << r.stats.irregular << ", marginal " << r.stats.marginal << ", |grad tau| >= 1 " << r.stats.gradient_too_large
      << ", errors " << r.stats.errors << ")\n"
      << "directions: " << r.directions << "\nmax dPsi discrepancy: " << detail::num(r.max_dpsi_discrepancy)
      << "\nmax <dPsi, N>: " << detail::num(r.max_normal_pairing)
      << "\nmax vertical curvature error: " << detail::num(r.max_vertical_error)
      << "\nirregular set: " << r.irregular_bases.size() << " base points"
      << "\nworst: " << detail::num(r.worst()) << '\n';
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// decompose

inline Json decomposition_json(const DecompositionReport& r) {
  Json recs = Json::array();
  for (const auto& d : r.records) {
    Json j{{"x", to_json(d.x)}, {"ok", d.ok}};
    if (!d.error.empty()) {
      j["error"] = d.error;
    } else {
      j.update(Json{{"wintgen", d.wintgen},
                    {"H", d.H},
                    {"sigma", d.sigma},
                    {"grad_norm", d.grad_norm},
                    {"delta_norm_error", d.delta_norm_error},
                    {"f_residual", d.f_residual},
                    {"xi_residual", d.xi_residual},
                    {"normality", d.normality},
                    {"tangency", d.tangency},
                    {"vertical_error", d.vertical_error},
                    {"psi1", d.psi1},
                    {"psi2", d.psi2},
                    {"nullity_residual", d.nullity_residual},
                    {"trace_residual", d.trace_residual}});
    }
    recs.push_back(j);
  }
  const auto& s = r.summary;
  Json out{{"chart", r.chart},
           {"gate_passed", r.gate_passed},
           {"success", r.success()},
           {"summary",
            {{"records", s.records},
             {"passed", s.passed},
             {"failed", s.failed},
             {"errors", s.errors},
             {"wintgen", s.wintgen},
             {"max_f_residual", s.max_f_residual},
             {"max_xi_residual", s.max_xi_residual},
             {"max_normality", s.max_normality},
             {"max_tangency", s.max_tangency},
             {"max_vertical_error", s.max_vertical_error},
             {"max_psi1", s.max_psi1},
             {"max_psi2", s.max_psi2},
             {"max_nullity_residual", s.max_nullity_residual},
             {"max_trace_residual", s.max_trace_residual},
             {"max_grad_norm", s.max_grad_norm},
             {"max_delta_norm_error", s.max_delta_norm_error},
             {"worst", s.worst()}}},
           {"records", recs}};
  if (!r.gate_passed) {
    out["reason"] = r.reason;
    out["message"] = r.message;
  }
  return out;
}

inline std::string decomposition_csv(const DecompositionReport& r) {
  std::ostringstream out;
  const int n = r.records.empty() ? 0 : static_cast<int>(r.records[0].x.size());
  out << detail::coords_header(n)
      << "ok,wintgen,H,sigma,grad_norm,delta_norm_error,f_residual,xi_residual,normality,tangency,"
         "vertical_error,psi1,psi2,nullity_residual,trace_residual,error\n";
  for (const auto& d : r.records) {
    out << detail::coords(d.x) << (d.ok ? 1 : 0) << ',';
    if (d.error.empty()) {
      out << (d.wintgen ? 1 : 0);
      for (double v : {d.H, d.sigma, d.grad_norm, d.delta_norm_error, d.f_residual, d.xi_residual, d.normality,
                       d.tangency, d.vertical_error, d.psi1, d.psi2, d.nullity_residual, d.trace_residual})
        out << ',' << detail::num(v);
      out << ",\n";
    } else {
      out << ",,,,,,,,,,,,,," << d.error << '\n';
    }
  }
  return out.str();
}

inline std::string decomposition_summary(const DecompositionReport& r) {
  std::ostringstream out;
  out << "chart: " << r.chart << '\n';
  if (!r.gate_passed) {
    out << "stopped: " << r.reason << " (" << r.message << ")\n";
    return out.str();
  }
  const auto& s = r.summary;
  out << "records: " << s.records << " passed " << s.passed << " failed " << s.failed << " errors " << s.errors
      << " (Wintgen ideal " << s.wintgen << ")\n"
      << "max |f - Psi(j)|: " << detail::num(s.max_f_residual) << "\nmax |xi - N(j)|: "
      << detail::num(s.max_xi_residual) << "\nmax psi1: " << detail::num(s.max_psi1)
      << "\nmax psi2: " << detail::num(s.max_psi2) << "\nmax nullity: " << detail::num(s.max_nullity_residual)
      << "\nmax trace: " << detail::num(s.max_trace_residual)
      << "\nmax vertical: " << detail::num(s.max_vertical_error) << "\nmax |grad tau|: "
      << detail::num(s.max_grad_norm) << "\nworst: " << detail::num(s.worst()) << '\n';
  return out.str();
}

}  // namespace wintgen
