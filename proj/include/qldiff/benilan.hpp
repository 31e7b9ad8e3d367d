#pragma once

#include <functional>
#include <vector>

#include "qldiff/grid.hpp"
#include "qldiff/weight.hpp"

namespace qldiff {

// Scaling denominator of the Benilan-Crandall bound d_t u >= -(u + 1/n)/K(t).
// theta = 0 gives K(t) = t exactly; theta > 0 gives K(t) = (1 - e^{-theta t})/theta,
// with a series branch below theta*t = 1e-4 to dodge cancellation.
double K_of_t(double t, double theta);

// Rescaled clock s(t) = (1/theta)(1 - e^{-theta t}); strictly increasing from
// s(0) = 0 toward s(inf) = 1/theta.  Requires theta > 0.
double time_rescale_s(double t, double theta);

struct BCContext {
  double theta = 0.0;
  double inv_n = 0.0;       // the +1/n shift of the regularized family
  double time_origin = 0.0; // K is evaluated at time_origin + t (series clocks start at 0)
};

// Pointwise residual r(t,x) = d_t u + (u + 1/n)/K(t) at interior sample times.
// Nonnegative r is the inequality; the separated solutions drive it to zero.
FieldSeries bc_residual(const FieldSeries& series, const BCContext& bc);

struct BCResidualSummary {
  double min_r = 0.0;
  double argmin_t = 0.0;
  double argmin_x = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// Resolution-proportional default tolerance: max(10 dt, 10 h) * sup |u|.
double default_bc_tol(const FieldSeries& series);

BCResidualSummary bc_residual_summary(const FieldSeries& series, const BCContext& bc,
                                      double tol = -1.0);

// Distributional form: for each nonnegative test function phi(t,x) supported
// in the interior, integrates [d_t u + (u + 1/n)/K] phi against d nu dt.
using SpaceTimeFn = std::function<double(double, double)>;
std::vector<double> bc_distributional_check(const FieldSeries& series,
                                            const std::vector<SpaceTimeFn>& test_fns,
                                            const WeightContext& ctx, const BCContext& bc);

} // namespace qldiff
