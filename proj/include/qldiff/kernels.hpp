#pragma once

#include <cstddef>
#include <span>

// Data-parallel reduction kernels. Every kernel comes in two flavours:
//
//   kernels::serial::*  -- plain reference loops, kept for testing
//   kernels::par::*     -- OpenMP versions; sums are accumulated over fixed
//                          4096-element blocks so the result does not depend
//                          on the number of threads
//
// The unqualified wrappers dispatch to par::* (which degrade to serial
// execution when OpenMP is absent), so library output is reproducible across
// thread counts.

namespace qldiff::kernels {

inline constexpr std::size_t block_size = 4096;

namespace serial {

double sum(std::span<const double> f);
// sum of w[i] * |f[i]|^p
double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> f, double p);
// sum of w[i] * f[i]^2
double weighted_sq_sum(std::span<const double> w, std::span<const double> f);
// trapezoid rule for samples f on abscissae x
double trapezoid(std::span<const double> x, std::span<const double> f);
double min(std::span<const double> f);
double max(std::span<const double> f);
double max_abs(std::span<const double> f);

} // namespace serial

namespace par {

double sum(std::span<const double> f);
double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> f, double p);
double weighted_sq_sum(std::span<const double> w, std::span<const double> f);
double trapezoid(std::span<const double> x, std::span<const double> f);
double min(std::span<const double> f);
double max(std::span<const double> f);
double max_abs(std::span<const double> f);

} // namespace par

inline double sum(std::span<const double> f) { return par::sum(f); }
inline double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> f, double p) {
  return par::weighted_abs_pow_sum(w, f, p);
}
inline double weighted_sq_sum(std::span<const double> w, std::span<const double> f) {
  return par::weighted_sq_sum(w, f);
}
inline double trapezoid(std::span<const double> x, std::span<const double> f) {
  return par::trapezoid(x, f);
}
inline double min(std::span<const double> f) { return par::min(f); }
inline double max(std::span<const double> f) { return par::max(f); }
inline double max_abs(std::span<const double> f) { return par::max_abs(f); }

} // namespace qldiff::kernels
