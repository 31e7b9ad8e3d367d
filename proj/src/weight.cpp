#include "qldiff/weight.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qldiff/grid.hpp"

namespace qldiff {

namespace {

// arcsec(z) for z >= 1, evaluated as arccos(1/z) to stay on the principal
// branch; arcsec(inf) = pi/2.
double arcsec(double z) {
  if (std::isinf(z)) return std::numbers::pi / 2.0;
  if (z < 1.0) throw std::domain_error("arcsec: argument below 1");
  return std::acos(1.0 / z);
}

} // namespace

WeightContext::WeightContext(double lambda_) : lambda(lambda_) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("WeightContext: lambda must be finite and >= 0");
}

double rho(const WeightContext& ctx, double x) {
  if (!(x > 0.0)) throw std::domain_error("rho: x must be positive");
  const double l = ctx.lambda;
  if (l == 0.0) return x * x;
  return std::sqrt(x) * (x + l) * std::sqrt(x + 2.0 * l);
}

double rho_prime(const WeightContext& ctx, double x) {
  if (!(x > 0.0)) throw std::domain_error("rho_prime: x must be positive");
  const double l = ctx.lambda;
  if (l == 0.0) return 2.0 * x;
  const double sx = std::sqrt(x);
  const double sx2l = std::sqrt(x + 2.0 * l);
  return 0.5 / sx * (x + l) * sx2l + sx * sx2l + sx * (x + l) * 0.5 / sx2l;
}

double nu_density(const WeightContext& ctx, double x) { return 1.0 / rho(ctx, x); }

double nu_interval(const WeightContext& ctx, double a, double b) {
  if (!(a >= 0.0) || !(b > a)) throw std::invalid_argument("nu_interval: need 0 <= a < b");
  const double l = ctx.lambda;
  if (l == 0.0) {
    if (a == 0.0) throw std::domain_error("nu_interval: nu_0 is not finite at 0");
    if (std::isinf(b)) return 1.0 / a;
    return 1.0 / a - 1.0 / b;
  }
  // antiderivative of 1/rho_lambda is (1/lambda) arcsec((x+lambda)/lambda)
  const double za = (a + l) / l;
  const double zb = std::isinf(b) ? infinity : (b + l) / l;
  return (arcsec(zb) - arcsec(za)) / l;
}

std::vector<double> nu_quadrature_weights(const WeightContext& ctx, const Grid& grid) {
  const auto& x = grid.nodes();
  if (x.front() <= 0.0) throw std::domain_error("nu_quadrature_weights: grid touches x <= 0");
  const std::size_t n = x.size();
  std::vector<double> w(n);
  double lo = x.front();
  for (std::size_t i = 0; i < n; ++i) {
    const double hi = (i + 1 < n) ? 0.5 * (x[i] + x[i + 1]) : x.back();
    w[i] = (hi > lo) ? nu_interval(ctx, lo, hi) : 0.0;
    lo = hi;
  }
  return w;
}

} // namespace qldiff
