#include "qldiff/experiment.hpp"

#include <cmath>
#include <stdexcept>

#include "qldiff/kernels.hpp"
#include "qldiff/norms.hpp"
#include "qldiff/special.hpp"

namespace qldiff {

namespace {

std::map<std::string, double> profile_params(const Config& cfg, const std::string& prefix) {
  std::map<std::string, double> params;
  for (const auto& key : cfg.keys_with_prefix(prefix))
    params[key.substr(prefix.size())] = cfg.get_double(key);
  return params;
}

// sup |rho g0| over a wide log-spaced sweep; used for the pre-run M-matrix check
double g_product_sup(const Profile& g0rho) {
  double s = 0.0;
  for (int i = 0; i <= 4096; ++i) {
    const double x = std::exp(-14.0 + 28.0 * static_cast<double>(i) / 4096.0);
    s = std::max(s, std::abs(g0rho(x)));
  }
  return s;
}

} // namespace

ExperimentConfig ExperimentConfig::from_config(const Config& cfg) {
  std::vector<std::string> errors;
  ExperimentConfig out;
  out.echo = cfg.entries();

  auto guard = [&errors](auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      errors.emplace_back(e.what());
    }
  };

  guard([&] {
    out.problem.lambda = cfg.get_double("problem.lambda");
    out.problem.T = cfg.get_double("problem.T");
    out.problem.theta = cfg.get_double("problem.theta", 0.0);
    out.problem.u0 =
        make_u0_profile(cfg.get_string("problem.u0"), profile_params(cfg, "problem.u0."));
    out.problem.g0rho =
        make_g_profile(cfg.get_string("problem.g", "zero"), profile_params(cfg, "problem.g."));
  });
  guard([&] { out.n_schedule = cfg.get_long_list("run.n"); });
  guard([&] {
    out.grid_count = static_cast<int>(cfg.get_long("run.grid_count", 200));
    out.grid_grading = cfg.get_double("run.grid_grading", 1.0);
    out.dt = cfg.get_double("run.dt");
    out.record_stride = static_cast<int>(cfg.get_long("run.record_stride", 1));
    out.positivity_tol = cfg.get_double("run.positivity_tol", -1.0);
  });
  guard([&] {
    if (cfg.has("audits.lp_m"))
      for (long m : cfg.get_long_list("audits.lp_m")) out.lp_ms.push_back(static_cast<int>(m));
    if (cfg.has("audits.delta")) out.delta = cfg.get_double("audits.delta");
    out.delta_variant = cfg.get_string("audits.delta_variant", "both");
    out.time_weighted = cfg.get_bool("audits.time_weighted", false);
    if (cfg.has("audits.tail_k")) out.tail_ks = cfg.get_double_list("audits.tail_k");
    if (cfg.has("audits.interior_t0")) {
      InteriorWindow win;
      win.t0 = cfg.get_double("audits.interior_t0");
      const auto d = cfg.get_double_list("audits.interior_d");
      if (d.size() != 2) throw std::runtime_error("config: audits.interior_d needs two entries");
      win.d_lo = d[0];
      win.d_hi = d[1];
      out.interior = win;
    }
    out.bc_check = cfg.get_bool("audits.bc", false);
    if (cfg.has("audits.holder_alpha")) out.holder_alpha = cfg.get_double("audits.holder_alpha");
    out.holder_budget =
        static_cast<std::uint64_t>(cfg.get_long("audits.holder_budget", 1'000'000));
    out.kappa = cfg.get_double("audits.kappa", 1.0);
    out.audit_tol = cfg.get_double("audits.audit_tol", default_audit_tol);
  });
  guard([&] { out.write_series = cfg.get_bool("output.series_csv", false); });

  // semantic validation, all problems reported together
  if (errors.empty()) {
    if (out.n_schedule.empty()) errors.emplace_back("config: run.n must not be empty");
    for (long n : out.n_schedule)
      if (n < 2) errors.emplace_back("config: every n must be >= 2");
    if (!(out.dt > 0.0)) errors.emplace_back("config: run.dt must be positive");
    if (out.grid_count < 3) errors.emplace_back("config: run.grid_count must be >= 3");
    if (out.problem.u0.fn) {
      try {
        out.problem.validate(1e-3, 64.0);
      } catch (const std::exception& e) {
        errors.emplace_back(e.what());
      }
      const double g_inf = g_product_sup(out.problem.g0rho);
      if (!(out.dt * g_inf < 1.0))
        errors.emplace_back("config: dt * ||rho g0||_inf must stay below 1");
    }
    for (int m : out.lp_ms)
      if (m < 0 || m > 2) errors.emplace_back("config: audits.lp_m entries must be in {0,1,2}");
    if (out.delta && !(*out.delta > 0.0 && *out.delta < 1.0))
      errors.emplace_back("config: audits.delta must lie in (0,1)");
    if (out.delta_variant != "both" && out.delta_variant != "shifted" &&
        out.delta_variant != "noshift")
      errors.emplace_back("config: audits.delta_variant must be both|shifted|noshift");
  }
  if (!errors.empty()) {
    std::string msg = "experiment config invalid:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::runtime_error(msg);
  }
  return out;
}

RunReport run_experiment(const ExperimentConfig& cfg, std::uint64_t seed,
                         std::vector<FieldSeries>* series_out) {
  RunReport report;
  report.seed = seed;
  report.config_echo = cfg.echo;
  const WeightContext ctx(cfg.problem.lambda);

  for (long n : cfg.n_schedule) {
    RunEntry entry;
    entry.n = n;
    entry.dt = cfg.dt;
    try {
      const auto [a_n, b_n] = truncation_schedule(cfg.problem.lambda, n);
      entry.a = a_n;
      entry.b = b_n;
      auto grid = make_graded_grid(a_n, b_n, cfg.grid_count, cfg.grid_grading);
      const auto inst = mollify_data(cfg.problem, n, grid, ctx);

      SolveOptions sopts;
      sopts.dt = cfg.dt;
      sopts.record_stride = cfg.record_stride;
      sopts.positivity_tol = cfg.positivity_tol;
      SolveResult res = solve(cfg.problem, inst, ctx, sopts);

      entry.steps = res.steps;
      entry.sup_u = res.sup_u;
      entry.c_inf = res.c_inf;
      entry.clamp_count = res.clamp_count;
      entry.clamped_nu_mass = res.clamped_nu_mass;
      entry.initial_nu_mass = res.initial_nu_mass;
      switch (res.status) {
        case SolveStatus::ok: entry.status = "ok"; break;
        case SolveStatus::positivity_violation: entry.status = "positivity_violation"; break;
        case SolveStatus::step_failure: entry.status = "step_failure"; break;
        case SolveStatus::clamp_budget_exceeded: entry.status = "clamp_budget_exceeded"; break;
      }
      entry.message = res.message;

      if (res.status == SolveStatus::ok) {
        AuditInputs in;
        in.series = &res.series;
        in.spec = &cfg.problem;
        in.ctx = &ctx;
        in.n = n;
        in.inv_n = inst.inv_n;
        in.kappa = cfg.kappa;
        in.audit_tol = cfg.audit_tol;

        for (int m : cfg.lp_ms) entry.reports.push_back(audit_lp(in, m));
        if (cfg.delta) {
          for (auto& r : audit_delta(in, *cfg.delta)) {
            const bool shifted = r.name == "delta_apriori";
            if (cfg.delta_variant == "shifted" && !shifted) continue;
            if (cfg.delta_variant == "noshift" && shifted) continue;
            entry.reports.push_back(std::move(r));
          }
        }
        if (cfg.time_weighted) entry.reports.push_back(audit_time_weighted(in));
        if (cfg.delta)
          for (double k : cfg.tail_ks)
            for (auto& r : audit_gradient_tails(in, k, *cfg.delta))
              entry.reports.push_back(std::move(r));
        if (cfg.interior) {
          const auto w = nu_quadrature_weights(ctx, *res.series.grid());
          double u0_l1 = 0.0;
          const auto& xs = res.series.grid()->nodes();
          for (std::size_t i = 0; i < xs.size(); ++i)
            u0_l1 += w[i] * std::abs(cfg.problem.u0(xs[i]));
          double g_inf = 0.0;
          for (double xx : xs) g_inf = std::max(g_inf, std::abs(cfg.problem.g0rho(xx)));
          const double C1 = constant_C_m1(0, cfg.problem.T, u0_l1, g_inf);
          const auto cs =
              interior_constants(*cfg.interior, cfg.problem, ctx, C1, cfg.problem.theta);
          for (auto& r : audit_interior(in, *cfg.interior, cs))
            entry.reports.push_back(std::move(r));
        }
        if (cfg.bc_check) {
          BCContext bc;
          bc.theta = cfg.problem.theta;
          bc.inv_n = inst.inv_n;
          entry.bc = bc_residual_summary(res.series, bc);
          const FieldSeries r = bc_residual(res.series, bc);
          for (std::size_t k = 0; k < r.snapshot_count(); ++k)
            entry.bc_min_profile.emplace_back(res.series.times()[k + 1],
                                              kernels::min(r.snapshot(k)));
          if (!entry.bc->pass) report.all_audits_pass = false;
        }
        if (cfg.holder_alpha) {
          HolderOptions hopts;
          hopts.pair_budget = cfg.holder_budget;
          hopts.seed = seed;
          entry.holder = parabolic_holder_seminorm(res.series, *cfg.holder_alpha, hopts);
        }
        for (const auto& r : entry.reports)
          if (!r.pass) report.all_audits_pass = false;
        if (cfg.write_series) entry.series_csv_name = "series_n" + std::to_string(n) + ".csv";
        if (series_out) {
          entry.series_index = static_cast<int>(series_out->size());
          series_out->push_back(res.series);
        }
      } else {
        report.any_run_error = true;
        if (series_out) { // partial, for diagnosis
          entry.series_index = static_cast<int>(series_out->size());
          series_out->push_back(res.series);
        }
      }
    } catch (const std::exception& e) {
      entry.status = "error";
      entry.message = e.what();
      report.any_run_error = true;
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

namespace {

// final snapshot of a solve from closed-form initial data
std::vector<double> final_state(const ProblemSpec& spec, const WeightContext& ctx, GridPtr grid,
                                const std::function<double(double)>& u0, double dt,
                                double inv_n = 0.0) {
  auto inst = exact_instance(grid, u0, [](double) { return 0.0; }, ctx, inv_n);
  SolveOptions sopts;
  sopts.dt = dt;
  sopts.record_stride = 1 << 20; // only the endpoint matters here
  SolveResult res = solve(spec, inst, ctx, sopts);
  if (res.status != SolveStatus::ok)
    throw std::runtime_error("convergence_study: solve failed: " + res.message);
  auto u = res.series.snapshot(res.series.snapshot_count() - 1);
  return std::vector<double>(u.begin(), u.end());
}

double window_max_diff(const Grid& grid, std::span<const double> a, std::span<const double> b,
                       const ConvergenceSetup& setup) {
  double err = 0.0;
  const auto& xs = grid.nodes();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (setup.err_x_lo && xs[i] < *setup.err_x_lo) continue;
    if (setup.err_x_hi && xs[i] > *setup.err_x_hi) continue;
    err = std::max(err, std::abs(a[i] - b[i]));
  }
  return err;
}

} // namespace

std::vector<ConvergenceRow> convergence_study(const ConvergenceSetup& setup) {
  if (setup.levels < 3) throw std::invalid_argument("convergence_study: need >= 3 levels");
  const WeightContext ctx(0.0);
  const SeparatedSolution sol =
      setup.G_t0 > 0.0
          ? SeparatedSolution::lambda0(setup.mu, setup.gamma, setup.G_t0, setup.t_start)
          : SeparatedSolution::saturating_lambda0(setup.mu, setup.gamma, setup.t_start);

  ProblemSpec spec;
  spec.lambda = 0.0;
  spec.T = setup.duration;
  spec.u0 = make_u0_profile("seplog", {{"mu", setup.mu}, {"gamma", setup.gamma}});
  spec.g0rho = make_g_profile("zero", {});

  std::vector<ConvergenceRow> rows;
  if (setup.mode == ConvergenceSetup::Mode::time) {
    // Richardson self-convergence in dt on a fixed grid, run on a uniformly
    // parabolic regularized instance.  Two reasons the separated oracle is
    // unusable here: the semi-implicit update reproduces its time factor
    // exactly (zero dt error by construction), and the fully degenerate
    // limit is not smooth enough in time for a clean O(dt) signal.
    auto grid = make_graded_grid(setup.a, setup.b, setup.base_count + 1, 1.0);
    ProblemSpec pspec = spec;
    // strictly positive inside (a,b): no interior degenerate fronts, whose
    // cell-quantized motion would mask the smooth O(dt) signal
    pspec.u0 = make_u0_profile("plateau", {{"left", setup.a},
                                           {"right", setup.b},
                                           {"shoulder", 0.25 * (setup.b - setup.a)},
                                           {"amplitude", 0.5}});
    auto u0 = [&](double x) { return pspec.u0(x); };
    std::vector<std::vector<double>> states;
    for (int level = 0; level <= setup.levels; ++level)
      states.push_back(final_state(pspec, ctx, grid, u0, setup.base_dt / (1 << level),
                                   setup.time_mode_inv_n));
    ConvergenceSetup windowed = setup;
    if (!windowed.err_x_lo) windowed.err_x_lo = setup.a + 0.4 * (setup.b - setup.a);
    if (!windowed.err_x_hi) windowed.err_x_hi = setup.a + 0.6 * (setup.b - setup.a);
    for (int level = 0; level < setup.levels; ++level) {
      ConvergenceRow row;
      row.h = (setup.b - setup.a) / setup.base_count;
      row.dt = setup.base_dt / (1 << level);
      row.error = window_max_diff(*grid, states[static_cast<std::size_t>(level)],
                                  states[static_cast<std::size_t>(level) + 1], windowed);
      row.observed_order =
          rows.empty() ? 0.0 : std::log2(rows.back().error / std::max(row.error, 1e-300));
      rows.push_back(row);
    }
    return rows;
  }

  for (int level = 0; level < setup.levels; ++level) {
    const int factor = 1 << level;
    const int count = setup.base_count * factor;
    const double dt =
        setup.mode == ConvergenceSetup::Mode::space ? setup.base_dt : setup.base_dt / factor;
    auto grid = make_graded_grid(setup.a, setup.b, count + 1, 1.0);
    const auto u = final_state(
        spec, ctx, grid,
        [&](double x) { return G_mu(setup.t_start, sol) * spatial_profile(x, sol); }, dt);
    const double G_end = G_mu(setup.t_start + setup.duration, sol);
    std::vector<double> exact(grid->size());
    for (std::size_t i = 0; i < exact.size(); ++i)
      exact[i] = G_end * spatial_profile(grid->nodes()[i], sol);
    ConvergenceRow row;
    row.h = (setup.b - setup.a) / count;
    row.dt = dt;
    row.error = window_max_diff(*grid, u, exact, setup);
    row.observed_order =
        rows.empty() ? 0.0 : std::log2(rows.back().error / std::max(row.error, 1e-300));
    rows.push_back(row);
  }
  return rows;
}

} // namespace qldiff
