#pragma once

#include <string>
#include <vector>

#include "qldiff/catalog.hpp"
#include "qldiff/grid.hpp"
#include "qldiff/weight.hpp"

namespace qldiff {

// One audited inequality: lhs measured from a numerical series, rhs the
// explicit constant (plus finite-n allowance); pass <=> lhs <= rhs (1 + tol).
struct EstimateReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0; // rhs - lhs
  bool pass = false;
  double audit_tol = 0.0;
  std::string note;
};

EstimateReport make_report(std::string name, double lhs, double rhs, double audit_tol,
                           std::string note = {});

inline constexpr double default_audit_tol = 0.05;

// Finite-n allowance standing in for the omega(n) terms: kappa * n^{-1/2},
// the slowest vanishing rate along the domain schedule.
double omega_allowance(long n, double kappa = 1.0);

// C_{m+1} = ||u0||^{m+1}_{L^{m+1}(d nu)} (T g_inf e^{T g_inf} + 1)
double constant_C_m1(int m, double T, double u0_norm_pow, double g_inf);
// C_delta = (T delta g_inf e^{T delta g_inf} + 1) ||u0||^delta_{L^delta(d nu)}
double constant_C_delta(double delta, double T, double u0_delta_pow, double g_inf);
// C' = C0 g_inf / 2
double constant_C_prime(double C0, double g_inf);

// Inputs shared by the audits of one run.
struct AuditInputs {
  const FieldSeries* series = nullptr;
  const ProblemSpec* spec = nullptr;
  const WeightContext* ctx = nullptr;
  long n = 0;           // regularization index (0: no allowance)
  double inv_n = 0.0;   // 1/n shift used by the run
  double kappa = 1.0;   // omega allowance scale
  double audit_tol = default_audit_tol;
};

// sup_t ||u||^{m+1}_{L^{m+1}(d nu)} + int_0^T ||grad u^{m/2+1}||^2_{L^2(dx)}
// against C_{m+1} + allowance.
EstimateReport audit_lp(const AuditInputs& in, int m);

// sup_t ||u + 1/n||^delta_{L^delta(d nu)} + (delta^2/(1-beta/2)^2) *
// int int |grad (u + 1/n)^{1-beta/2}|^2 with beta = 1 - delta, against
// C_delta + allowance.  Also returns the variant without the +1/n shift.
std::vector<EstimateReport> audit_delta(const AuditInputs& in, double delta);

// 4 ||t d_t (u + 1/n)^{1/2}||^2_{L^2(dt x d nu)} + (T/2) ||grad u(T)||^2
// against C' + allowance.
EstimateReport audit_time_weighted(const AuditInputs& in);

// Gradient tail bounds: sublevel {u <= 1/k} against (1/k + 1/n)^{beta} C_delta
// / delta^2 with the proof's exponent beta = 1 - delta (the statement's
// exponent delta is recorded in the note); superlevel {u >= k} has no closed
// rhs and is reported for monotone decay in k.
std::vector<EstimateReport> audit_gradient_tails(const AuditInputs& in, double k, double delta);

// Interior window D = (t0, T] x [d_lo, d_hi].
struct InteriorWindow {
  double t0 = 0.0;
  double d_lo = 0.0;
  double d_hi = 0.0;
};

struct InteriorConstants {
  double N = 0.0;  // 1/(K(t0) rho(d_lo)) + ||g0||_inf(D)
  double B0 = 0.0; // 2 C1 / d + N d^2 / 2
  double B1 = 0.0; // 4 B0 / d + d N / 4
  double C1 = 0.0;
  double Ccal1 = 0.0; // (1/K(t0) + ||g0 rho||_inf) C1
  double d = 0.0;     // distance of D to the boundary {0}
};

InteriorConstants interior_constants(const InteriorWindow& win, const ProblemSpec& spec,
                                     const WeightContext& ctx, double C1, double theta);

// Checks sup u <= B0, sup |grad u| <= B1, and u <= Ccal1^{1/2} x^{1/2} on the
// window (the last with the finite-n allowance).
std::vector<EstimateReport> audit_interior(const AuditInputs& in, const InteriorWindow& win,
                                           const InteriorConstants& cs);

// Appendix bounds for semiconvex profiles (dimension d_dim, omega(1) = 2):
// sup bound  ||g||_{L^1(B_2R)} / (omega(d) R^d) + N R^2 / (2 d)
// lip bound  2 M / delta + delta N / 2
double semiconvex_sup_bound(double l1_mass, double R, double N, int d_dim = 1);
double semiconvex_lip_bound(double M, double delta, double N);

} // namespace qldiff
