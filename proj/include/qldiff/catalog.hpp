#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace qldiff {

// Code-registered named profiles with explicit parameters; configs refer to
// catalog entries by name instead of parsing expressions, so every profile's
// provenance stays testable.
struct Profile {
  std::string name;
  std::map<std::string, double> params;
  std::function<double(double)> fn;

  double operator()(double x) const { return fn(x); }
};

// Smooth helpers used by the catalog.
// bump(x): exp(1 - 1/(1-s^2)) on |s| < 1 with s = (x-center)/radius, peak 1.
double bump_value(double x, double center, double radius);
// C-infinity ramp: 0 for s <= 0, 1 for s >= 1.
double smoothstep_value(double s);

// Initial-data profiles (u0 >= 0):
//   zero
//   bump      { center, radius, amplitude }
//   plateau   { left, right, shoulder, amplitude }   flat top with C-inf shoulders
//   seplog    { mu, gamma }                          mu (log x - gamma x)_+
Profile make_u0_profile(const std::string& name, const std::map<std::string, double>& params);

// Profiles for the product rho_lambda * g0 (bounded, C_0):
//   zero
//   gbump     { center, radius, amplitude }          nonnegative for amplitude >= 0
//   gdip      { pos_center, pos_radius, pos_amplitude,
//               dip_center, dip_radius, depth }      bump minus a dip of the given depth
Profile make_g_profile(const std::string& name, const std::map<std::string, double>& params);

std::vector<std::string> u0_profile_names();
std::vector<std::string> g_profile_names();

// The continuum problem: weight parameter, horizon, data, and the lower-bound
// parameter theta with rho_lambda g0 >= -theta.
struct ProblemSpec {
  double lambda = 0.0;
  double T = 1.0;
  Profile u0;
  Profile g0rho; // stored as the product rho_lambda * g0
  double theta = 0.0;

  // samples the data over (lo, hi) and rejects negative u0 or a g0 product
  // dipping below -theta
  void validate(double lo, double hi, int samples = 4096) const;
};

} // namespace qldiff
