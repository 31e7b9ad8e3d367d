#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qldiff/experiment.hpp"
#include "qldiff/hardy.hpp"
#include "qldiff/report.hpp"
#include "qldiff/special.hpp"

namespace fs = std::filesystem;
using qldiff::Config;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  std::string format = "json";
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "experiment config file")->required();
  sub->add_option("--out", args.out_dir, "output directory");
  sub->add_option("--seed", args.seed, "seed for sampled estimators");
  sub->add_option("--format", args.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

int run_audit_like(const CommonArgs& args, bool force_series) {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = qldiff::ExperimentConfig::from_config(Config::parse_file(args.config_path));
  if (force_series) cfg.write_series = true;
  std::vector<qldiff::FieldSeries> series;
  const qldiff::RunReport report = qldiff::run_experiment(cfg, args.seed, &series);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  qldiff::EmitOptions opts;
  opts.out_dir = args.out_dir;
  opts.json = args.format == "json" || force_series;
  opts.csv = true;
  qldiff::emit(report, series, opts, elapsed);
  for (const auto& e : report.entries) {
    std::printf("n=%ld status=%s sup_u=%.6g c_inf=%.6g audits=%zu\n", e.n, e.status.c_str(),
                e.sup_u, e.c_inf, e.reports.size());
    for (const auto& r : e.reports)
      std::printf("  [%s] %-28s lhs=%.6g rhs=%.6g margin=%.3g\n", r.pass ? "pass" : "FAIL",
                  r.name.c_str(), r.lhs, r.rhs, r.margin);
    if (e.bc)
      std::printf("  [%s] bc_residual min=%.6g at (t=%.4g, x=%.4g) tol=%.3g\n",
                  e.bc->pass ? "pass" : "FAIL", e.bc->min_r, e.bc->argmin_t, e.bc->argmin_x,
                  e.bc->tol);
  }
  if (report.any_run_error) return 2;
  return report.all_audits_pass ? 0 : 1;
}

int run_converge(const CommonArgs& args) {
  const Config cfg = Config::parse_file(args.config_path);
  qldiff::ConvergenceSetup setup;
  const std::string mode = cfg.get_string("converge.mode", "both");
  if (mode == "both")
    setup.mode = qldiff::ConvergenceSetup::Mode::both;
  else if (mode == "space")
    setup.mode = qldiff::ConvergenceSetup::Mode::space;
  else if (mode == "time")
    setup.mode = qldiff::ConvergenceSetup::Mode::time;
  else
    throw std::runtime_error("converge.mode must be both|space|time");
  setup.levels = static_cast<int>(cfg.get_long("converge.levels", 3));
  setup.base_count = static_cast<int>(cfg.get_long("converge.base_count", 200));
  setup.base_dt = cfg.get_double("converge.base_dt", 2e-3);
  setup.a = cfg.get_double("converge.a", 0.5);
  setup.b = cfg.get_double("converge.b", 8.0);
  setup.t_start = cfg.get_double("converge.t_start", 1.0);
  setup.duration = cfg.get_double("converge.duration", 1.0);
  setup.mu = cfg.get_double("converge.mu", 1.0);
  setup.gamma = cfg.get_double("converge.gamma", 0.5 * std::log(2.0));
  if (cfg.has("converge.err_x_lo")) setup.err_x_lo = cfg.get_double("converge.err_x_lo");
  if (cfg.has("converge.err_x_hi")) setup.err_x_hi = cfg.get_double("converge.err_x_hi");

  const auto rows = qldiff::convergence_study(setup);
  qldiff::RunReport report;
  report.seed = args.seed;
  report.config_echo = cfg.entries();
  report.convergence = rows;
  fs::create_directories(args.out_dir);
  {
    std::ofstream os(fs::path(args.out_dir) / "report.json");
    os << qldiff::report_json(report);
  }
  std::printf("%-12s %-12s %-14s %s\n", "h", "dt", "error", "observed_order");
  for (const auto& r : rows)
    std::printf("%-12.5g %-12.5g %-14.6e %.3f\n", r.h, r.dt, r.error, r.observed_order);
  return 0;
}

int run_hardy(const CommonArgs& args) {
  const Config cfg = Config::parse_file(args.config_path);
  const auto lambdas = cfg.get_double_list("hardy.lambda");
  const auto ps = cfg.get_double_list("hardy.p");
  const auto qs = cfg.get_double_list("hardy.q");
  const auto bs = cfg.get_double_list("hardy.b");
  const auto entries = qldiff::verdict_lattice(lambdas, ps, qs, bs);
  fs::create_directories(args.out_dir);
  if (args.format == "csv") {
    std::ofstream os(fs::path(args.out_dir) / "hardy_verdicts.csv");
    os << qldiff::lattice_csv(entries);
  } else {
    std::ofstream os(fs::path(args.out_dir) / "hardy_verdicts.json");
    os << qldiff::hardy_json(entries);
  }
  {
    std::ofstream os(fs::path(args.out_dir) / "hardy_sweeps.csv");
    os << qldiff::sweep_csv(entries);
  }
  int inconsistent = 0;
  for (const auto& e : entries) {
    std::printf("lambda=%g p=%g q=%g b=%g sup_F=%g continuous=%d compact=%d%s\n",
                e.query.lambda, e.query.p, e.query.q, e.query.b, e.verdict.sup_F,
                e.verdict.continuous, e.verdict.compact,
                e.verdict.consistency.empty() ? "" : "  [consistency note]");
    if (!e.verdict.consistency.empty()) ++inconsistent;
  }
  if (inconsistent > 0)
    std::fprintf(stderr, "%d verdict(s) carry modulus-consistency notes (see output file)\n",
                 inconsistent);
  return 0;
}

int run_special(const CommonArgs& args) {
  const Config cfg = Config::parse_file(args.config_path);
  const double lambda = cfg.get_double("special.lambda", 0.0);
  const double mu = cfg.get_double("special.mu", 1.0);
  qldiff::SeparatedSolution sol =
      lambda == 0.0
          ? qldiff::SeparatedSolution::lambda0(mu, cfg.get_double("special.gamma", 0.5 * std::log(2.0)),
                                               cfg.get_double("special.G_t0", 1.0),
                                               cfg.get_double("special.t0", 1.0))
          : qldiff::SeparatedSolution::lambda_pos(lambda, mu, cfg.get_double("special.c", -1.0),
                                                  cfg.get_double("special.k", 0.0),
                                                  cfg.get_double("special.G_t0", 1.0),
                                                  cfg.get_double("special.t0", 1.0));
  const double a = cfg.get_double("special.a", 0.5);
  const double b = cfg.get_double("special.b", 8.0);
  const int count = static_cast<int>(cfg.get_long("special.grid_count", 801));
  const double t_start = cfg.get_double("special.t_start", sol.t0);
  const double duration = cfg.get_double("special.duration", 1.0);
  const double dt = cfg.get_double("special.dt", 1e-2);

  auto grid = qldiff::make_graded_grid(a, b, count, 1.0);
  const auto series = qldiff::sample_series(sol, grid, t_start, duration, dt);
  fs::create_directories(args.out_dir);
  qldiff::write_csv(series, (fs::path(args.out_dir) / "special_series.csv").string());

  // series timestamps are relative to t_start; the residual wants wall times
  std::vector<double> abs_times(series.times());
  for (double& t : abs_times) t += t_start;
  const double residual = qldiff::classical_residual(sol, *grid, abs_times);
  nlohmann::ordered_json j;
  j["lambda"] = lambda;
  j["mu"] = mu;
  j["classical_residual"] = residual;
  if (lambda == 0.0 && sol.gamma > 0.0) {
    const auto roots = qldiff::support_fixed_points(sol.gamma);
    if (roots) {
      j["support"] = {roots->first, roots->second};
    }
  }
  const auto ex = qldiff::lipschitz_sharpness_exhibit(sol);
  j["lipschitz_exhibit"] = {{"y_plus", ex.y_plus},
                            {"interior_slope", ex.interior_slope},
                            {"exterior_slope", ex.exterior_slope},
                            {"unbounded_sup", ex.unbounded_sup},
                            {"l3_nu", ex.l3_nu}};
  std::ofstream os(fs::path(args.out_dir) / "special.json");
  os << j.dump(2) << "\n";
  std::printf("classical residual: %.3e\n", residual);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the degenerate quasilinear diffusion family"};
  app.require_subcommand(1);

  CommonArgs solve_args, audit_args, conv_args, hardy_args, special_args;
  CLI::App* solve = app.add_subcommand("solve", "integrate the regularized problems, emit series");
  add_common(solve, solve_args);
  CLI::App* audit = app.add_subcommand("audit", "run the estimate audits over the n-schedule");
  add_common(audit, audit_args);
  CLI::App* converge = app.add_subcommand("converge", "manufactured-solution refinement study");
  add_common(converge, conv_args);
  CLI::App* hardy = app.add_subcommand("hardy", "embedding verdict lattice");
  add_common(hardy, hardy_args);
  CLI::App* special = app.add_subcommand("special", "sample closed-form separated solutions");
  add_common(special, special_args);

  CLI11_PARSE(app, argc, argv);
  try {
    if (solve->parsed()) return run_audit_like(solve_args, true);
    if (audit->parsed()) return run_audit_like(audit_args, false);
    if (converge->parsed()) return run_converge(conv_args);
    if (hardy->parsed()) return run_hardy(hardy_args);
    if (special->parsed()) return run_special(special_args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
