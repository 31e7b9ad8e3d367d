#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qldiff/catalog.hpp"
#include "qldiff/grid.hpp"
#include "qldiff/weight.hpp"

namespace qldiff {

// Truncated-domain schedule Omega_n = (a_n, b_n): (1/sqrt(n), n) for
// lambda = 0 and (1/n, n) for lambda > 0.  Along either schedule
// (1/n) nu_lambda(Omega_n) decreases to zero.  Requires n >= 2.
std::pair<double, double> truncation_schedule(double lambda, long n);

// The n-th regularized Dirichlet problem, discretized: domain, mollified
// data, and the 1/n shift.  inv_n = 0 yields the unregularized equation for
// manufactured-solution runs.
struct RegularizedInstance {
  long n = 0; // 0 marks a manufactured (unregularized) instance
  double a = 0.0, b = 0.0;
  double inv_n = 0.0;
  GridPtr grid;
  std::vector<double> u0;    // u_{0,n} on the grid
  std::vector<double> rho_g; // rho_lambda * g_n on the grid
  std::vector<double> rho_x; // rho_lambda at the nodes (cached for stepping)
  double rho_g_inf = 0.0;    // ||rho_lambda g_n||_inf
};

// Mollified restriction of the continuum data to Omega_n: cutoff away from
// the boundary, convolution with a smooth bump of radius min(a_n/2, 1/n),
// clamped nonnegative, zeroed within one bump radius of each endpoint.
// The grid must span (a_n, b_n).
RegularizedInstance mollify_data(const ProblemSpec& spec, long n, GridPtr grid,
                                 const WeightContext& ctx);

// Instance with data sampled exactly (no cutoff, no mollification); used to
// feed closed-form initial data to the scheme.
RegularizedInstance exact_instance(GridPtr grid, const std::function<double(double)>& u0,
                                   const std::function<double(double)>& g0rho,
                                   const WeightContext& ctx, double inv_n);

struct StepStats {
  long clamped = 0;
  double clamped_nu_mass = 0.0;
  double min_before_clamp = 0.0;
};

// One semi-implicit step: the coefficient rho (u^m + 1/n) is frozen at the
// old state, diffusion and reaction are implicit, Dirichlet rows pin the
// endpoints to zero.  dt ||rho g||_inf < 1 keeps the system an M-matrix.
// Undershoots in [-positivity_tol, 0) are clamped to zero and counted;
// anything deeper throws.
Field step(const Field& state, double t, double dt, const RegularizedInstance& inst,
           const WeightContext& ctx, double positivity_tol, StepStats* stats = nullptr);

enum class SolveStatus { ok, positivity_violation, step_failure, clamp_budget_exceeded };

struct SolveOptions {
  double dt = 1e-3;
  int record_stride = 1;         // snapshot every k-th step
  double positivity_tol = -1.0;  // auto: 1e-10 * ||u0n||_inf
  double clamp_budget_rel = 1e-6; // vs the initial nu-mass
};

struct SolveResult {
  FieldSeries series;
  SolveStatus status = SolveStatus::ok;
  std::string message;
  double sup_u = 0.0;      // running max over the run
  double c_inf = 0.0;      // ||u0n||_inf exp(T ||rho g||_inf)
  long clamp_count = 0;
  double clamped_nu_mass = 0.0;
  double initial_nu_mass = 0.0;
  long steps = 0;
};

// Integrates the instance from 0 to T.  On a step failure the partial series
// is retained for diagnosis and the status records the abort.
SolveResult solve(const ProblemSpec& spec, const RegularizedInstance& inst,
                  const WeightContext& ctx, const SolveOptions& opts);

// Space-time test function with analytic derivatives.
struct TestFunction {
  std::function<double(double, double)> value;
  std::function<double(double, double)> dt;
  std::function<double(double, double)> dx;
};

// Smooth product bump phi(t,x) supported in (t_lo,t_hi) x (x_lo,x_hi).
TestFunction make_bump_test_function(double t_lo, double t_hi, double x_lo, double x_hi);

// Discrete residual of the weak form: the difference of the two sides of the
// identity defining weak solutions, evaluated on the stored snapshots with
// trapezoid time integrals.  phi must vanish on the lateral boundary and at
// the final time.
double weak_residual(const FieldSeries& series, const TestFunction& phi,
                     const WeightContext& ctx, const ProblemSpec& spec);

} // namespace qldiff
