#pragma once

#include <limits>
#include <vector>

namespace qldiff {

class Grid;

inline constexpr double infinity = std::numeric_limits<double>::infinity();

// Degeneracy weight family rho_lambda(x) = x^{1/2} (x+lambda) (x+2 lambda)^{1/2}
// together with the measure d nu_lambda = dx / rho_lambda(x).  Immutable.
struct WeightContext {
  double lambda = 0.0;

  explicit WeightContext(double lambda_);
};

// rho_lambda(x); requires x > 0.  Reduces to x^2 when lambda = 0.
double rho(const WeightContext& ctx, double x);

// d/dx rho_lambda(x); requires x > 0.
double rho_prime(const WeightContext& ctx, double x);

// Density of nu_lambda, i.e. 1 / rho_lambda(x).
double nu_density(const WeightContext& ctx, double x);

// Exact nu_lambda((a,b)).  b may be +infinity.  For lambda = 0 the measure
// diverges at 0, so a must stay positive; for lambda > 0, nu_lambda((0,inf))
// is finite (= pi / (2 lambda)).
double nu_interval(const WeightContext& ctx, double a, double b);

// Midpoint-cell quadrature weights w_i with sum_i w_i f(x_i) ~ integral of f
// against d nu_lambda over the grid span.  Each w_i is the exact nu-mass of
// the cell around node i, so constants integrate with zero error.
std::vector<double> nu_quadrature_weights(const WeightContext& ctx, const Grid& grid);

} // namespace qldiff
