// Timing comparison of the serial reference kernels against the OpenMP
// variants.  Run with OMP_NUM_THREADS set to taste.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "qldiff/grid.hpp"
#include "qldiff/kernels.hpp"
#include "qldiff/norms.hpp"

using clock_type = std::chrono::steady_clock;

namespace {

double time_of(int reps, double& sink, double (*fn)(std::span<const double>, std::span<const double>),
               std::span<const double> a, std::span<const double> b) {
  const auto t0 = clock_type::now();
  for (int r = 0; r < reps; ++r) sink += fn(a, b);
  return std::chrono::duration<double>(clock_type::now() - t0).count() / reps;
}

} // namespace

int main() {
  const std::size_t n = 1 << 22;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> w(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = dist(rng);
    f[i] = dist(rng) - 0.3;
  }
  double sink = 0.0;

  std::printf("%-24s %12s %12s %8s\n", "kernel", "serial [s]", "openmp [s]", "speedup");
  {
    const double ts = time_of(20, sink, qldiff::kernels::serial::weighted_sq_sum, w, f);
    const double tp = time_of(20, sink, qldiff::kernels::par::weighted_sq_sum, w, f);
    std::printf("%-24s %12.6f %12.6f %8.2f\n", "weighted_sq_sum", ts, tp, ts / tp);
  }
  {
    const double ts = time_of(20, sink, qldiff::kernels::serial::trapezoid, w, f);
    const double tp = time_of(20, sink, qldiff::kernels::par::trapezoid, w, f);
    std::printf("%-24s %12.6f %12.6f %8.2f\n", "trapezoid", ts, tp, ts / tp);
  }

  // Hoelder pair scan on a synthetic series
  {
    auto grid = qldiff::make_graded_grid(0.5, 8.0, 400, 1.0);
    std::vector<double> times(200);
    for (std::size_t k = 0; k < times.size(); ++k) times[k] = 0.01 * static_cast<double>(k);
    qldiff::FieldSeries series(grid, times);
    std::vector<double> row(grid->size());
    for (std::size_t k = 0; k < times.size(); ++k) {
      for (std::size_t i = 0; i < row.size(); ++i)
        row[i] = dist(rng) * 0.01 + grid->nodes()[i] / (1.0 + times[k]);
      series.set_snapshot(k, row);
    }
    qldiff::HolderOptions opts;
    opts.pair_budget = 2'000'000;
    const auto t0 = clock_type::now();
    const double ref = qldiff::detail::holder_scan_reference(series, 0.5, opts);
    const double ts = std::chrono::duration<double>(clock_type::now() - t0).count();
    const auto t1 = clock_type::now();
    const double par = qldiff::parabolic_holder_seminorm(series, 0.5, opts);
    const double tp = std::chrono::duration<double>(clock_type::now() - t1).count();
    std::printf("%-24s %12.6f %12.6f %8.2f   (values %.6g / %.6g)\n", "holder_pair_scan", ts, tp,
                ts / tp, ref, par);
  }
  std::printf("(sink %.3g)\n", sink);
  return 0;
}
