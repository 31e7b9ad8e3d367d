#include "qldiff/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace qldiff {

namespace {

using ordered_json = nlohmann::ordered_json;

// infinities are not representable in JSON; keep them readable
ordered_json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

ordered_json to_json(const EstimateReport& r) {
  ordered_json j;
  j["name"] = r.name;
  j["lhs"] = num(r.lhs);
  j["rhs"] = num(r.rhs);
  j["margin"] = num(r.margin);
  j["pass"] = r.pass;
  j["audit_tol"] = r.audit_tol;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

ordered_json to_json(const RunEntry& e) {
  ordered_json j;
  j["n"] = e.n;
  j["a"] = num(e.a);
  j["b"] = num(e.b);
  j["dt"] = e.dt;
  j["steps"] = e.steps;
  j["status"] = e.status;
  if (!e.message.empty()) j["message"] = e.message;
  j["sup_u"] = num(e.sup_u);
  j["c_inf"] = num(e.c_inf);
  j["c_inf_margin"] = num(e.c_inf - e.sup_u);
  j["clamp_count"] = e.clamp_count;
  j["clamped_nu_mass"] = num(e.clamped_nu_mass);
  j["initial_nu_mass"] = num(e.initial_nu_mass);
  ordered_json audits = ordered_json::array();
  for (const auto& r : e.reports) audits.push_back(to_json(r));
  j["audits"] = audits;
  if (e.bc) {
    ordered_json b;
    b["min_r"] = num(e.bc->min_r);
    b["argmin_t"] = num(e.bc->argmin_t);
    b["argmin_x"] = num(e.bc->argmin_x);
    b["tol"] = num(e.bc->tol);
    b["pass"] = e.bc->pass;
    j["bc_residual"] = b;
  }
  if (e.holder) j["holder_seminorm"] = num(*e.holder);
  if (!e.series_csv_name.empty()) j["series_csv"] = e.series_csv_name;
  return j;
}

} // namespace

std::string report_json(const RunReport& report) {
  ordered_json j;
  j["seed"] = report.seed;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : report.config_echo) cfg[k] = v;
  j["config"] = cfg;
  ordered_json runs = ordered_json::array();
  for (const auto& e : report.entries) runs.push_back(to_json(e));
  j["runs"] = runs;
  if (!report.convergence.empty()) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.convergence) {
      ordered_json row;
      row["h"] = num(r.h);
      row["dt"] = num(r.dt);
      row["error"] = num(r.error);
      row["observed_order"] = num(r.observed_order);
      rows.push_back(row);
    }
    j["convergence"] = rows;
  }
  j["all_audits_pass"] = report.all_audits_pass;
  j["any_run_error"] = report.any_run_error;
  return j.dump(2) + "\n";
}

std::string hardy_json(const std::vector<LatticeEntry>& entries) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : entries) {
    ordered_json j;
    j["lambda"] = num(e.query.lambda);
    j["p"] = num(e.query.p);
    j["q"] = num(e.query.q);
    j["b"] = num(e.query.b);
    j["sup_F"] = num(e.verdict.sup_F);
    j["limit_at_0"] = num(e.verdict.limit_at_0);
    j["limit_at_b"] = num(e.verdict.limit_at_b);
    j["continuous"] = e.verdict.continuous;
    j["compact"] = e.verdict.compact;
    if (!e.verdict.consistency.empty()) j["consistency"] = e.verdict.consistency;
    arr.push_back(j);
  }
  ordered_json j;
  j["verdicts"] = arr;
  return j.dump(2) + "\n";
}

void emit(const RunReport& report, const std::vector<FieldSeries>& series,
          const EmitOptions& opts, double elapsed_seconds) {
  namespace fs = std::filesystem;
  fs::create_directories(opts.out_dir);
  if (opts.json) {
    std::ofstream os(fs::path(opts.out_dir) / "report.json");
    os << report_json(report);
  }
  {
    // wall-clock metadata lives apart from the deterministic report
    ordered_json meta;
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    meta["unix_time"] =
        std::chrono::duration_cast<std::chrono::seconds>(now).count();
    meta["elapsed_seconds"] = elapsed_seconds;
    std::ofstream os(fs::path(opts.out_dir) / "meta.json");
    os << meta.dump(2) << "\n";
  }
  if (opts.csv) {
    for (const auto& e : report.entries) {
      if (e.series_csv_name.empty() || e.series_index < 0 ||
          static_cast<std::size_t>(e.series_index) >= series.size())
        continue;
      write_csv(series[static_cast<std::size_t>(e.series_index)],
                (fs::path(opts.out_dir) / e.series_csv_name).string());
    }
    for (const auto& e : report.entries) {
      if (e.bc_min_profile.empty()) continue;
      std::ofstream os(fs::path(opts.out_dir) /
                       ("bc_min_r_n" + std::to_string(e.n) + ".csv"));
      os << "t,min_r\n";
      char buf[64];
      for (const auto& [t, r] : e.bc_min_profile) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t, r);
        os << buf;
      }
    }
  }
}

} // namespace qldiff
