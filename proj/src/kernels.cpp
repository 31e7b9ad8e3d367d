#include "qldiff/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qldiff::kernels {

namespace {

// Blocked sum: partial sums over fixed-size blocks, combined in block order.
// The block layout depends only on the data size, so serial execution and any
// OpenMP schedule produce the same bits.
template <class Term>
double block_sum(std::size_t n, Term term, bool parallel) {
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + block_size - 1) / block_size;
  std::vector<double> partial(nblocks, 0.0);
#ifdef QLDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (parallel && nblocks > 1)
#endif
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * block_size;
    const std::size_t hi = std::min(lo + block_size, n);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  (void)parallel;
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

template <class Term>
double loop_sum(std::size_t n, Term term) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += term(i);
  return s;
}

double pow_abs(double v, double p) {
  if (p == 1.0) return std::abs(v);
  if (p == 2.0) return v * v;
  return std::pow(std::abs(v), p);
}

} // namespace

namespace serial {

double sum(std::span<const double> f) {
  return loop_sum(f.size(), [&](std::size_t i) { return f[i]; });
}

double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> f, double p) {
  return loop_sum(f.size(), [&](std::size_t i) { return w[i] * pow_abs(f[i], p); });
}

double weighted_sq_sum(std::span<const double> w, std::span<const double> f) {
  return loop_sum(f.size(), [&](std::size_t i) { return w[i] * f[i] * f[i]; });
}

double trapezoid(std::span<const double> x, std::span<const double> f) {
  if (x.size() != f.size()) throw std::invalid_argument("trapezoid: size mismatch");
  if (x.size() < 2) return 0.0;
  return loop_sum(x.size() - 1, [&](std::size_t i) {
    return 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
  });
}

double min(std::span<const double> f) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : f) m = std::min(m, v);
  return m;
}

double max(std::span<const double> f) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : f) m = std::max(m, v);
  return m;
}

double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

} // namespace serial

namespace par {

double sum(std::span<const double> f) {
  return block_sum(f.size(), [&](std::size_t i) { return f[i]; }, true);
}

double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> f, double p) {
  return block_sum(f.size(), [&](std::size_t i) { return w[i] * pow_abs(f[i], p); }, true);
}

double weighted_sq_sum(std::span<const double> w, std::span<const double> f) {
  return block_sum(f.size(), [&](std::size_t i) { return w[i] * f[i] * f[i]; }, true);
}

double trapezoid(std::span<const double> x, std::span<const double> f) {
  if (x.size() != f.size()) throw std::invalid_argument("trapezoid: size mismatch");
  if (x.size() < 2) return 0.0;
  return block_sum(
      x.size() - 1,
      [&](std::size_t i) { return 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]); }, true);
}

double min(std::span<const double> f) {
  double m = std::numeric_limits<double>::infinity();
  const long long n = static_cast<long long>(f.size());
#ifdef QLDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(static) reduction(min : m) if (n > 1 << 14)
#endif
  for (long long i = 0; i < n; ++i) m = std::min(m, f[static_cast<std::size_t>(i)]);
  return m;
}

double max(std::span<const double> f) {
  double m = -std::numeric_limits<double>::infinity();
  const long long n = static_cast<long long>(f.size());
#ifdef QLDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(static) reduction(max : m) if (n > 1 << 14)
#endif
  for (long long i = 0; i < n; ++i) m = std::max(m, f[static_cast<std::size_t>(i)]);
  return m;
}

double max_abs(std::span<const double> f) {
  double m = 0.0;
  const long long n = static_cast<long long>(f.size());
#ifdef QLDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(static) reduction(max : m) if (n > 1 << 14)
#endif
  for (long long i = 0; i < n; ++i) m = std::max(m, std::abs(f[static_cast<std::size_t>(i)]));
  return m;
}

} // namespace par

} // namespace qldiff::kernels
