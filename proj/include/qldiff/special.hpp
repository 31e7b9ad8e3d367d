#pragma once

#include <optional>
#include <span>
#include <utility>

#include "qldiff/grid.hpp"
#include "qldiff/weight.hpp"

namespace qldiff {

// Separated solution u(t,x) = G_mu(t) F_mu(x) of the g0 = 0 problem.
//
//   G_mu(t) = 1 / (1/G(t0) + mu (t - t0)),  mu > 0
//   lambda = 0:  F_mu(y) = mu (log y - gamma y)_+
//   lambda > 0:  F_mu(p) = (mu artanh(sqrt(p^2-l^2)/p) + p (c - (mu/l) arcsec(p/l)) + k)_+
//                with p = x + lambda
//
// The saturating normalization 1/G(t0) = mu t0 turns the time factor into
// G(t) = 1/(mu t), the equality case of the Benilan-Crandall bound.
struct SeparatedSolution {
  double lambda = 0.0;
  double mu = 1.0;
  double G_t0 = 1.0; // value of G at the reference time
  double t0 = 1.0;   // reference time
  double gamma = 0.0; // lambda = 0 spatial family (gamma = 0: unbounded log branch)
  double c = 0.0;     // lambda > 0 spatial family, c <= 0
  double k = 0.0;

  static SeparatedSolution lambda0(double mu, double gamma, double G_t0, double t0);
  static SeparatedSolution lambda_pos(double lambda, double mu, double c, double k,
                                      double G_t0, double t0);
  // 1/G(t0) = mu t0, so G(t) = 1/(mu t)
  static SeparatedSolution saturating_lambda0(double mu, double gamma, double t0);
};

// Time factor; throws when 1/G(t0) + mu (t - t0) <= 0 (past blow-up).
double G_mu(double t, const SeparatedSolution& sol);

// lambda = 0 profile at y > 0.
double F_lambda0(double y, const SeparatedSolution& sol);
// one-sided interior derivative of the lambda = 0 profile on its positive set
double F_lambda0_prime(double y, const SeparatedSolution& sol);

// Roots of log y = gamma y bracketing the support: two roots for
// gamma < 1/e, the double root (e,e) at gamma = 1/e, empty beyond.
std::optional<std::pair<double, double>> support_fixed_points(double gamma);

// lambda > 0 profile in the shifted coordinate p = x + lambda > lambda.
double F_lambda_pos(double p, const SeparatedSolution& sol);
double F_lambda_pos_prime(double p, const SeparatedSolution& sol);   // on the positive set
double F_lambda_pos_second(double p, const SeparatedSolution& sol);  // on the positive set

// u(t,x), spatial profile value F(x), and whether x is in the positive set.
double spatial_profile(double x, const SeparatedSolution& sol);
double eval_u(double t, double x, const SeparatedSolution& sol);

// max |d_t u - rho_lambda u d_x^2 u| over sampled (t, x) with x in the open
// positive set at least one cell away from the support boundary, using
// analytic derivatives throughout.
double classical_residual(const SeparatedSolution& sol, const Grid& grid,
                          std::span<const double> times);

// One-sided slopes at the right support endpoint y_plus, witnessing the
// gradient jump.  For gamma = 0 (lambda = 0 log branch) there is no right
// endpoint; the exhibit instead reports the unbounded-sup flag together with
// the finite L^3(d nu_0) norm.
struct SlopeExhibit {
  double y_plus = 0.0;
  double interior_slope = 0.0;
  double exterior_slope = 0.0;
  bool unbounded_sup = false;
  double l3_nu = 0.0; // ||F||_{L^3(d nu_lambda)} for the unbounded branch
};
SlopeExhibit lipschitz_sharpness_exhibit(const SeparatedSolution& sol);

// Sample u on a grid over [t_start, t_start + duration] into a FieldSeries
// (series timestamps are relative to t_start; pass t_start as the time
// origin when auditing saturation).
FieldSeries sample_series(const SeparatedSolution& sol, GridPtr grid, double t_start,
                          double duration, double dt);

} // namespace qldiff
