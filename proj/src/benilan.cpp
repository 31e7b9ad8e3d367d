#include "qldiff/benilan.hpp"

#include <cmath>
#include <stdexcept>

#include "qldiff/kernels.hpp"

namespace qldiff {

double K_of_t(double t, double theta) {
  if (!(t > 0.0)) throw std::invalid_argument("K_of_t: t must be positive");
  if (theta < 0.0) throw std::invalid_argument("K_of_t: theta must be >= 0");
  if (theta == 0.0) return t;
  const double a = theta * t;
  if (a < 1e-4) {
    // (1 - e^{-a})/theta = t (1 - a/2 + a^2/6 - a^3/24)
    return t * (1.0 - a / 2.0 + a * a / 6.0 - a * a * a / 24.0);
  }
  return (1.0 - std::exp(-a)) / theta;
}

double time_rescale_s(double t, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("time_rescale_s: theta must be positive");
  if (t < 0.0) throw std::invalid_argument("time_rescale_s: t must be >= 0");
  if (t == 0.0) return 0.0;
  return K_of_t(t, theta);
}

FieldSeries bc_residual(const FieldSeries& series, const BCContext& bc) {
  const std::size_t K = series.snapshot_count();
  if (K < 3) throw std::invalid_argument("bc_residual: need >= 3 snapshots");
  const std::size_t M = series.node_count();
  const auto& t = series.times();

  // interior sample times only; the residual needs a centered d_t and K(t) > 0
  std::vector<double> rt(t.begin() + 1, t.begin() + static_cast<long>(K - 1));
  const double shift = rt.front();
  for (double& v : rt) v -= shift;
  FieldSeries out(series.grid(), std::move(rt));

#ifdef QLDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long kk = 1; kk < static_cast<long long>(K - 1); ++kk) {
    const std::size_t k = static_cast<std::size_t>(kk);
    auto um = series.snapshot(k - 1);
    auto u0 = series.snapshot(k);
    auto up = series.snapshot(k + 1);
    auto r = out.snapshot(k - 1);
    const double dt2 = t[k + 1] - t[k - 1];
    const double Kt = K_of_t(bc.time_origin + t[k], bc.theta);
    for (std::size_t i = 0; i < M; ++i)
      r[i] = (up[i] - um[i]) / dt2 + (u0[i] + bc.inv_n) / Kt;
  }
  return out;
}

double default_bc_tol(const FieldSeries& series) {
  const auto& t = series.times();
  double dt = 0.0;
  for (std::size_t k = 1; k < series.snapshot_count(); ++k) dt = std::max(dt, t[k] - t[k - 1]);
  const double h = series.grid()->max_spacing();
  const double scale = kernels::max_abs(series.data());
  return std::max(10.0 * dt, 10.0 * h) * scale;
}

BCResidualSummary bc_residual_summary(const FieldSeries& series, const BCContext& bc,
                                      double tol) {
  const FieldSeries r = bc_residual(series, bc);
  BCResidualSummary s;
  s.tol = tol >= 0.0 ? tol : default_bc_tol(series);
  s.min_r = kernels::min(r.data());
  // locate the arg-min for the report
  for (std::size_t k = 0; k < r.snapshot_count(); ++k) {
    auto snap = r.snapshot(k);
    for (std::size_t i = 0; i < snap.size(); ++i) {
      if (snap[i] == s.min_r) {
        s.argmin_t = bc.time_origin + series.times()[k + 1];
        s.argmin_x = r.grid()->nodes()[i];
      }
    }
  }
  s.pass = s.min_r >= -s.tol;
  return s;
}

std::vector<double> bc_distributional_check(const FieldSeries& series,
                                            const std::vector<SpaceTimeFn>& test_fns,
                                            const WeightContext& ctx, const BCContext& bc) {
  const FieldSeries r = bc_residual(series, bc);
  const auto w = nu_quadrature_weights(ctx, *series.grid());
  const auto& x = series.grid()->nodes();
  std::vector<double> out;
  out.reserve(test_fns.size());
  for (const auto& phi : test_fns) {
    // trapezoid in time over the interior samples, nu-weights in space
    std::vector<double> slice(r.snapshot_count());
    for (std::size_t k = 0; k < r.snapshot_count(); ++k) {
      auto snap = r.snapshot(k);
      const double t = bc.time_origin + series.times()[k + 1];
      double s = 0.0;
      for (std::size_t i = 0; i < snap.size(); ++i) s += w[i] * snap[i] * phi(t, x[i]);
      slice[k] = s;
    }
    out.push_back(kernels::trapezoid(r.times(), slice));
  }
  return out;
}

} // namespace qldiff
