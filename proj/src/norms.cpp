#include "qldiff/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "qldiff/kernels.hpp"

namespace qldiff {

double lp_nu(std::span<const double> values, double p, std::span<const double> weights) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_nu: p must be positive");
  if (values.size() != weights.size()) throw std::invalid_argument("lp_nu: size mismatch");
  return std::pow(kernels::weighted_abs_pow_sum(weights, values, p), 1.0 / p);
}

double lp_nu(const Field& f, double p, const WeightContext& ctx) {
  const auto w = nu_quadrature_weights(ctx, *f.grid);
  return lp_nu(f.values, p, w);
}

double lp_dx(const Field& f, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_dx: p must be positive");
  std::vector<double> q(f.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::pow(std::abs(f.values[i]), p);
  return std::pow(kernels::trapezoid(f.grid->nodes(), q), 1.0 / p);
}

double grad_l2(std::span<const double> x, std::span<const double> u) {
  std::vector<double> g(x.size());
  gradient(x, u, g);
  for (double& v : g) v *= v;
  return std::sqrt(kernels::trapezoid(x, g));
}

double grad_l2(const Field& f) { return grad_l2(f.grid->nodes(), f.values); }

double vp_norm(const Field& f, double p, const WeightContext& ctx) {
  if (!(p >= 1.0)) throw std::invalid_argument("vp_norm: p must be >= 1");
  return lp_nu(f, p, ctx) + grad_l2(f);
}

void NormKind::validate() const {
  std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, norm_kind::LpNu> || std::is_same_v<T, norm_kind::LpDx>) {
          if (!(k.p > 0.0)) throw std::invalid_argument("NormKind: p must be positive");
        } else if constexpr (std::is_same_v<T, norm_kind::Vp>) {
          if (!(k.p >= 1.0)) throw std::invalid_argument("NormKind: Vp needs p >= 1");
        } else if constexpr (std::is_same_v<T, norm_kind::QuasiLdelta>) {
          if (!(k.delta > 0.0 && k.delta < 1.0))
            throw std::invalid_argument("NormKind: delta must lie in (0,1)");
        } else if constexpr (std::is_same_v<T, norm_kind::ParabolicHolder>) {
          if (!(k.alpha > 0.0 && k.alpha <= 1.0))
            throw std::invalid_argument("NormKind: alpha must lie in (0,1]");
        }
      },
      tag);
}

double NormKind::evaluate(const Field& f, const WeightContext& ctx) const {
  validate();
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, norm_kind::LpNu>) return lp_nu(f, k.p, ctx);
        else if constexpr (std::is_same_v<T, norm_kind::LpDx>) return lp_dx(f, k.p);
        else if constexpr (std::is_same_v<T, norm_kind::GradL2>) return grad_l2(f);
        else if constexpr (std::is_same_v<T, norm_kind::Vp>) return vp_norm(f, k.p, ctx);
        else if constexpr (std::is_same_v<T, norm_kind::QuasiLdelta>)
          return lp_nu(f, k.delta, ctx);
        else
          throw std::invalid_argument("NormKind: parabolic seminorm needs a series");
      },
      tag);
}

double NormKind::evaluate(const FieldSeries& s, const WeightContext& ctx) const {
  validate();
  if (const auto* h = std::get_if<norm_kind::ParabolicHolder>(&tag))
    return parabolic_holder_seminorm(s, h->alpha);
  double sup = 0.0;
  for (std::size_t k = 0; k < s.snapshot_count(); ++k)
    sup = std::max(sup, evaluate(s.snapshot_field(k), ctx));
  return sup;
}

double truncate_value(double s, double k) {
  if (k < 1.0) throw std::invalid_argument("truncate: k must be >= 1");
  return std::clamp(s, 1.0 / k, k);
}

double complement_value(double s, double k) { return s - truncate_value(s, k); }

Field truncate(const Field& f, double k) {
  Field out = f;
  for (double& v : out.values) v = truncate_value(v, k);
  return out;
}

Field complement(const Field& f, double k) {
  Field out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = f.values[i] - truncate_value(f.values[i], k);
  return out;
}

namespace {

struct PointSet {
  std::vector<double> t, x, u; // flattened window lattice, time major
  std::size_t nt = 0, nx = 0;
  std::size_t size() const { return t.size(); }
};

PointSet collect_points(const FieldSeries& series, const SeriesWindow& win,
                        std::size_t stride_t = 1, std::size_t stride_x = 1) {
  const auto& times = series.times();
  const auto& nodes = series.grid()->nodes();
  std::vector<std::size_t> kt, kx;
  for (std::size_t k = 0; k < series.snapshot_count(); k += stride_t) {
    if (win.t_lo && times[k] < *win.t_lo) continue;
    if (win.t_hi && times[k] > *win.t_hi) continue;
    kt.push_back(k);
  }
  for (std::size_t i = 0; i < nodes.size(); i += stride_x) {
    if (win.x_lo && nodes[i] < *win.x_lo) continue;
    if (win.x_hi && nodes[i] > *win.x_hi) continue;
    kx.push_back(i);
  }
  PointSet ps;
  ps.nt = kt.size();
  ps.nx = kx.size();
  ps.t.reserve(ps.nt * ps.nx);
  ps.x.reserve(ps.nt * ps.nx);
  ps.u.reserve(ps.nt * ps.nx);
  for (std::size_t k : kt) {
    auto snap = series.snapshot(k);
    for (std::size_t i : kx) {
      ps.t.push_back(times[k]);
      ps.x.push_back(nodes[i]);
      ps.u.push_back(snap[i]);
    }
  }
  return ps;
}

double pair_ratio(const PointSet& ps, std::size_t a, std::size_t b, double alpha) {
  const double dt = std::abs(ps.t[a] - ps.t[b]);
  const double dx = std::abs(ps.x[a] - ps.x[b]);
  if (dt == 0.0 && dx == 0.0) return 0.0;
  const double den = std::pow(dt, 0.5 * alpha) + std::pow(dx, alpha);
  return std::abs(ps.u[a] - ps.u[b]) / den;
}

double exhaustive_scan(const PointSet& ps, double alpha, bool parallel) {
  const long long n = static_cast<long long>(ps.size());
  double m = 0.0;
#ifdef QLDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 16) reduction(max : m) if (parallel)
#endif
  for (long long a = 0; a < n; ++a)
    for (long long b = a + 1; b < n; ++b)
      m = std::max(m, pair_ratio(ps, static_cast<std::size_t>(a),
                                 static_cast<std::size_t>(b), alpha));
  (void)parallel;
  return m;
}

double sampled_scan(const PointSet& full, double alpha, const HolderOptions& opts,
                    bool parallel) {
  // strided sub-lattice sized so its pair count fits most of the budget
  const double target_pts = std::sqrt(1.8 * static_cast<double>(opts.pair_budget));
  const double shrink =
      std::sqrt(static_cast<double>(full.size()) / std::max(target_pts, 2.0));
  const std::size_t st = std::max<std::size_t>(1, static_cast<std::size_t>(shrink));
  double best;
  {
    PointSet sub;
    sub.nt = (full.nt + st - 1) / st;
    sub.nx = (full.nx + st - 1) / st;
    for (std::size_t k = 0; k < full.nt; k += st)
      for (std::size_t i = 0; i < full.nx; i += st) {
        const std::size_t p = k * full.nx + i;
        sub.t.push_back(full.t[p]);
        sub.x.push_back(full.x[p]);
        sub.u.push_back(full.u[p]);
      }
    best = exhaustive_scan(sub, alpha, parallel);
  }
  // seeded random top-up over the full lattice; pairs drawn up front so the
  // result does not depend on thread count
  const std::size_t extra = static_cast<std::size_t>(opts.pair_budget / 10);
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, full.size() - 1);
  std::vector<std::size_t> pa(extra), pb(extra);
  for (std::size_t r = 0; r < extra; ++r) {
    pa[r] = pick(rng);
    pb[r] = pick(rng);
  }
  double m = best;
#ifdef QLDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(static) reduction(max : m) if (parallel)
#endif
  for (long long r = 0; r < static_cast<long long>(extra); ++r)
    m = std::max(m, pair_ratio(full, pa[static_cast<std::size_t>(r)],
                               pb[static_cast<std::size_t>(r)], alpha));
  return m;
}

double holder_impl(const FieldSeries& series, double alpha, const HolderOptions& opts,
                   bool parallel) {
  if (!(alpha > 0.0)) throw std::invalid_argument("parabolic_holder_seminorm: alpha must be > 0");
  if (series.snapshot_count() == 0)
    throw std::invalid_argument("parabolic_holder_seminorm: empty series");
  PointSet ps = collect_points(series, opts.window);
  if (ps.size() < 2) return 0.0;
  const double total_pairs =
      0.5 * static_cast<double>(ps.size()) * static_cast<double>(ps.size() - 1);
  if (total_pairs <= static_cast<double>(opts.pair_budget))
    return exhaustive_scan(ps, alpha, parallel);
  return sampled_scan(ps, alpha, opts, parallel);
}

} // namespace

double parabolic_holder_seminorm(const FieldSeries& series, double alpha,
                                 const HolderOptions& opts) {
  return holder_impl(series, alpha, opts, true);
}

namespace detail {
double holder_scan_reference(const FieldSeries& series, double alpha, const HolderOptions& opts) {
  return holder_impl(series, alpha, opts, false);
}
} // namespace detail

} // namespace qldiff
