#include "qldiff/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qldiff/kernels.hpp"
#include "qldiff/norms.hpp"

namespace qldiff {

std::pair<double, double> truncation_schedule(double lambda, long n) {
  if (n < 2) throw std::invalid_argument("truncation_schedule: need n >= 2");
  if (lambda < 0.0) throw std::invalid_argument("truncation_schedule: lambda must be >= 0");
  const double nd = static_cast<double>(n);
  if (lambda == 0.0) return {1.0 / std::sqrt(nd), nd};
  return {1.0 / nd, nd};
}

namespace {

// 32-point Gauss-Legendre rule on [-1,1], nodes by Newton on P_32.
struct GaussLegendre32 {
  std::array<double, 32> x{}, w{};
  GaussLegendre32() {
    const int n = 32;
    for (int i = 0; i < n / 2; ++i) {
      double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double p0 = 0, p1 = 0, dp = 0;
      for (int it = 0; it < 100; ++it) {
        p0 = 1.0;
        p1 = t;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-15) break;
      }
      x[i] = -t;
      x[n - 1 - i] = t;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

const GaussLegendre32& gl32() {
  static const GaussLegendre32 rule;
  return rule;
}

// normalization of the standard bump exp(-1/(1-t^2)) on (-1,1)
double bump_kernel_mass() {
  static const double mass = [] {
    const auto& gl = gl32();
    double s = 0.0; // composite over 8 panels for good measure
    for (int p = 0; p < 8; ++p) {
      const double lo = -1.0 + 0.25 * p, hi = lo + 0.25;
      for (int i = 0; i < 32; ++i) {
        const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.x[i];
        s += 0.5 * (hi - lo) * gl.w[i] * std::exp(-1.0 / (1.0 - t * t));
      }
    }
    return s;
  }();
  return mass;
}

double mollifier_kernel(double s, double r) {
  const double t = s / r;
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t)) / (bump_kernel_mass() * r);
}

} // namespace

RegularizedInstance mollify_data(const ProblemSpec& spec, long n, GridPtr grid,
                                 const WeightContext& ctx) {
  const auto [a_n, b_n] = truncation_schedule(spec.lambda, n);
  const double span_tol = 1e-9 * b_n;
  if (std::abs(grid->a() - a_n) > span_tol || std::abs(grid->b() - b_n) > span_tol)
    throw std::invalid_argument("mollify_data: grid does not span (a_n, b_n)");

  RegularizedInstance inst;
  inst.n = n;
  inst.a = a_n;
  inst.b = b_n;
  inst.inv_n = 1.0 / static_cast<double>(n);
  inst.grid = grid;

  const double r = std::min(a_n / 2.0, inst.inv_n);
  auto cutoff = [&](double x) {
    return smoothstep_value((x - (a_n + 2.0 * r)) / r) *
           smoothstep_value(((b_n - 2.0 * r) - x) / r);
  };

  const auto& nodes = grid->nodes();
  const std::size_t M = nodes.size();
  inst.u0.assign(M, 0.0);
  inst.rho_g.assign(M, 0.0);
  inst.rho_x.assign(M, 0.0);

  const auto& gl = gl32();
  for (std::size_t i = 0; i < M; ++i) {
    const double x = nodes[i];
    inst.rho_x[i] = rho(ctx, x);
    inst.rho_g[i] = cutoff(x) * spec.g0rho(x);
    if (x <= a_n + r || x >= b_n - r) continue; // zero within one bump radius
    double conv = 0.0;
    for (int q = 0; q < 32; ++q) {
      const double s = r * gl.x[q];
      const double xs = x - s;
      if (xs <= 0.0) continue;
      const double u0v = spec.u0(xs);
      if (u0v < 0.0) throw std::invalid_argument("mollify_data: u0 is negative");
      conv += r * gl.w[q] * mollifier_kernel(s, r) * cutoff(xs) * u0v;
    }
    inst.u0[i] = std::max(conv, 0.0);
  }
  inst.u0.front() = 0.0;
  inst.u0.back() = 0.0;
  inst.rho_g_inf = kernels::max_abs(inst.rho_g);

  // data-requirement invariants
  double g0rho_inf = 0.0;
  for (double x : nodes) g0rho_inf = std::max(g0rho_inf, std::abs(spec.g0rho(x)));
  if (inst.rho_g_inf > g0rho_inf * (1.0 + 1e-12))
    throw std::logic_error("mollify_data: ||rho g_n|| exceeds ||rho g_0||");
  for (double v : inst.rho_g)
    if (v < -spec.theta * (1.0 + 1e-12))
      throw std::logic_error("mollify_data: rho g_n dips below -theta");
  return inst;
}

RegularizedInstance exact_instance(GridPtr grid, const std::function<double(double)>& u0,
                                   const std::function<double(double)>& g0rho,
                                   const WeightContext& ctx, double inv_n) {
  if (inv_n < 0.0) throw std::invalid_argument("exact_instance: inv_n must be >= 0");
  RegularizedInstance inst;
  inst.n = inv_n > 0.0 ? std::lround(1.0 / inv_n) : 0;
  inst.a = grid->a();
  inst.b = grid->b();
  inst.inv_n = inv_n;
  inst.grid = grid;
  const auto& nodes = grid->nodes();
  inst.u0.resize(nodes.size());
  inst.rho_g.resize(nodes.size());
  inst.rho_x.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    inst.u0[i] = u0(nodes[i]);
    if (inst.u0[i] < 0.0) throw std::invalid_argument("exact_instance: u0 is negative");
    inst.rho_g[i] = g0rho(nodes[i]);
    inst.rho_x[i] = rho(ctx, nodes[i]);
  }
  inst.u0.front() = 0.0;
  inst.u0.back() = 0.0;
  inst.rho_g_inf = kernels::max_abs(inst.rho_g);
  return inst;
}

namespace {

struct Tridiag {
  std::vector<double> lower, diag, upper, rhs, scratch;
  void resize(std::size_t m) {
    lower.assign(m, 0.0);
    diag.assign(m, 1.0);
    upper.assign(m, 0.0);
    rhs.assign(m, 0.0);
    scratch.assign(m, 0.0);
  }
  // Thomas algorithm; throws on a vanishing pivot
  void solve(std::vector<double>& out) {
    const std::size_t m = diag.size();
    std::vector<double>& c = scratch;
    c[0] = upper[0] / diag[0];
    out[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < m; ++i) {
      const double piv = diag[i] - lower[i] * c[i - 1];
      if (piv == 0.0 || !std::isfinite(piv))
        throw std::runtime_error("tridiagonal solve: singular pivot");
      c[i] = upper[i] / piv;
      out[i] = (rhs[i] - lower[i] * out[i - 1]) / piv;
    }
    for (std::size_t i = m - 1; i-- > 0;) out[i] -= c[i] * out[i + 1];
  }
};

void assemble_step(const std::vector<double>& u, double dt, const RegularizedInstance& inst,
                   Tridiag& sys) {
  const auto& x = inst.grid->nodes();
  const std::size_t m = x.size();
  // Dirichlet rows
  sys.lower[0] = sys.upper[0] = 0.0;
  sys.diag[0] = 1.0;
  sys.rhs[0] = 0.0;
  sys.lower[m - 1] = sys.upper[m - 1] = 0.0;
  sys.diag[m - 1] = 1.0;
  sys.rhs[m - 1] = 0.0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double hm = x[i] - x[i - 1];
    const double hp = x[i + 1] - x[i];
    const double coef = inst.rho_x[i] * (u[i] + inst.inv_n); // frozen coefficient
    const double cl = 2.0 * coef / (hm * (hm + hp));
    const double cu = 2.0 * coef / (hp * (hm + hp));
    sys.lower[i] = -dt * cl;
    sys.upper[i] = -dt * cu;
    sys.diag[i] = 1.0 + dt * (cl + cu) - dt * inst.rho_g[i];
    sys.rhs[i] = u[i] + dt * inst.rho_g[i] * inst.inv_n;
  }
}

void clamp_negatives(std::vector<double>& u, double tol, const std::vector<double>& nu_w,
                     const Grid& grid, StepStats* stats) {
  double worst = 0.0;
  std::size_t worst_i = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < worst) {
      worst = u[i];
      worst_i = i;
    }
  }
  if (stats) stats->min_before_clamp = worst;
  if (worst < -tol) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "positivity violation: u = %.3e at x = %.6g (tolerance %.3e)", worst,
                  grid.nodes()[worst_i], tol);
    throw std::runtime_error(msg);
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < 0.0) {
      if (stats) {
        ++stats->clamped;
        stats->clamped_nu_mass += nu_w[i] * (-u[i]);
      }
      u[i] = 0.0;
    }
  }
}

} // namespace

Field step(const Field& state, double /*t*/, double dt, const RegularizedInstance& inst,
           const WeightContext& ctx, double positivity_tol, StepStats* stats) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (!(dt * inst.rho_g_inf < 1.0))
    throw std::invalid_argument("step: dt * ||rho g||_inf must stay below 1");
  if (state.size() != inst.grid->size()) throw std::invalid_argument("step: grid mismatch");

  Tridiag sys;
  sys.resize(state.size());
  assemble_step(state.values, dt, inst, sys);
  Field out = Field::zeros(inst.grid);
  sys.solve(out.values);
  const auto nu_w = nu_quadrature_weights(ctx, *inst.grid);
  clamp_negatives(out.values, positivity_tol, nu_w, *inst.grid, stats);
  return out;
}

SolveResult solve(const ProblemSpec& spec, const RegularizedInstance& inst,
                  const WeightContext& ctx, const SolveOptions& opts) {
  const double T = spec.T;
  const double dt = opts.dt;
  if (!(dt > 0.0)) throw std::invalid_argument("solve: dt must be positive");
  const long steps = std::lround(T / dt);
  if (steps < 1 || std::abs(static_cast<double>(steps) * dt - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("solve: dt must divide T");
  if (!(dt * inst.rho_g_inf < 1.0))
    throw std::invalid_argument("solve: dt * ||rho g||_inf must stay below 1");
  if (opts.record_stride < 1) throw std::invalid_argument("solve: record_stride must be >= 1");

  const std::size_t m = inst.grid->size();
  const auto nu_w = nu_quadrature_weights(ctx, *inst.grid);

  const double u0_inf = kernels::max_abs(inst.u0);
  const double pos_tol =
      opts.positivity_tol >= 0.0 ? opts.positivity_tol : 1e-10 * u0_inf;

  std::vector<double> rec_times;
  for (long k = 0; k <= steps; k += opts.record_stride)
    rec_times.push_back(static_cast<double>(k) * dt);
  if ((steps % opts.record_stride) != 0) rec_times.push_back(static_cast<double>(steps) * dt);

  SolveResult res{FieldSeries(inst.grid, rec_times), SolveStatus::ok, {}, 0.0, 0.0, 0, 0.0, 0.0, 0};
  res.c_inf = u0_inf * std::exp(T * inst.rho_g_inf);
  res.initial_nu_mass = kernels::weighted_abs_pow_sum(nu_w, inst.u0, 1.0);

  std::vector<double> u = inst.u0;
  res.series.push_snapshot(u);
  res.sup_u = kernels::max(u);

  Tridiag sys;
  sys.resize(m);
  std::vector<double> unew(m);
  StepStats stats;

  const double clamp_budget = opts.clamp_budget_rel * res.initial_nu_mass;
  for (long k = 0; k < steps; ++k) {
    assemble_step(u, dt, inst, sys);
    try {
      sys.solve(unew);
      clamp_negatives(unew, pos_tol, nu_w, *inst.grid, &stats);
    } catch (const std::exception& e) {
      res.status = std::string(e.what()).find("positivity") != std::string::npos
                       ? SolveStatus::positivity_violation
                       : SolveStatus::step_failure;
      res.message = e.what();
      break;
    }
    u.swap(unew);
    res.steps = k + 1;
    res.sup_u = std::max(res.sup_u, kernels::max(u));
    if (((k + 1) % opts.record_stride) == 0 || k + 1 == steps) res.series.push_snapshot(u);
    if (res.initial_nu_mass > 0.0 && stats.clamped_nu_mass > clamp_budget) {
      res.status = SolveStatus::clamp_budget_exceeded;
      char msg[128];
      std::snprintf(msg, sizeof(msg), "cumulative clamped nu-mass %.3e exceeds budget %.3e",
                    stats.clamped_nu_mass, clamp_budget);
      res.message = msg;
      break;
    }
  }
  res.clamp_count = stats.clamped;
  res.clamped_nu_mass = stats.clamped_nu_mass;
  return res;
}

TestFunction make_bump_test_function(double t_lo, double t_hi, double x_lo, double x_hi) {
  const double tc = 0.5 * (t_lo + t_hi), tr = 0.5 * (t_hi - t_lo);
  const double xc = 0.5 * (x_lo + x_hi), xr = 0.5 * (x_hi - x_lo);
  auto b = [](double s) { return std::abs(s) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0; };
  auto db = [b](double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    const double d = 1.0 - s * s;
    return b(s) * (-2.0 * s / (d * d));
  };
  TestFunction phi;
  phi.value = [=](double t, double x) { return b((t - tc) / tr) * b((x - xc) / xr); };
  phi.dt = [=](double t, double x) { return db((t - tc) / tr) / tr * b((x - xc) / xr); };
  phi.dx = [=](double t, double x) { return b((t - tc) / tr) * db((x - xc) / xr) / xr; };
  return phi;
}

double weak_residual(const FieldSeries& series, const TestFunction& phi,
                     const WeightContext& ctx, const ProblemSpec& spec) {
  const auto& x = series.grid()->nodes();
  const auto& t = series.times();
  const std::size_t K = series.snapshot_count();
  const std::size_t M = x.size();
  const auto w = nu_quadrature_weights(ctx, *series.grid());

  // support check: phi must vanish on the lateral boundary and at the final time
  double scale = 0.0, boundary = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    for (double xx : {x.front(), x.back()}) boundary = std::max(boundary, std::abs(phi.value(t[k], xx)));
    scale = std::max(scale, std::abs(phi.value(t[k], x[M / 2])));
  }
  for (std::size_t i = 0; i < M; ++i)
    boundary = std::max(boundary, std::abs(phi.value(t[K - 1], x[i])));
  if (boundary > 1e-12 * std::max(scale, 1.0))
    throw std::invalid_argument("weak_residual: phi is not supported inside the space-time grid");

  std::vector<double> s_time(K), s_grad(K), s_g(K);
  std::vector<double> gu(M), integrand(M), usq(M), gusq(M);
  for (std::size_t k = 0; k < K; ++k) {
    auto u = series.snapshot(k);
    double a = 0.0, d = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      a += w[i] * u[i] * phi.dt(t[k], x[i]);
      d += w[i] * u[i] * spec.g0rho(x[i]) * phi.value(t[k], x[i]);
      usq[i] = 0.5 * u[i] * u[i];
    }
    gradient(x, u, gu);
    gradient(x, usq, gusq); // grad (u^2/2)
    for (std::size_t i = 0; i < M; ++i)
      integrand[i] = gusq[i] * phi.dx(t[k], x[i]) + gu[i] * gu[i] * phi.value(t[k], x[i]);
    s_time[k] = a;
    s_g[k] = d;
    s_grad[k] = kernels::trapezoid(x, integrand);
  }
  const double T1 = kernels::trapezoid(std::span<const double>(t.data(), K), s_time);
  const double T2 = kernels::trapezoid(std::span<const double>(t.data(), K), s_grad);
  const double T4 = kernels::trapezoid(std::span<const double>(t.data(), K), s_g);
  double init = 0.0;
  auto u0 = series.snapshot(0);
  for (std::size_t i = 0; i < M; ++i) init += w[i] * u0[i] * phi.value(t[0], x[i]);
  return -T1 + T2 - init - T4;
}

} // namespace qldiff
