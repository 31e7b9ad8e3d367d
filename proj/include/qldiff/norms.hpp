#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>

#include "qldiff/grid.hpp"
#include "qldiff/weight.hpp"

namespace qldiff {

// ||f||_{L^p(d nu_lambda)} via the exact-cell quadrature weights.  For p < 1
// this is the L^delta quasi-norm used by the delta estimate.
double lp_nu(const Field& f, double p, const WeightContext& ctx);
// Same, with precomputed nu weights (audits reuse one weight vector).
double lp_nu(std::span<const double> values, double p, std::span<const double> weights);

// ||f||_{L^p(dx)} by trapezoid.
double lp_dx(const Field& f, double p);

// ||grad f||_{L^2(dx)}: central-difference gradient, trapezoid in x.
double grad_l2(const Field& f);
double grad_l2(std::span<const double> x, std::span<const double> u);

// ||f||_{V^p} = ||f||_{L^p(d nu)} + ||grad f||_{L^2(dx)}
double vp_norm(const Field& f, double p, const WeightContext& ctx);

// Tagged norm descriptor for config-driven functionals.
namespace norm_kind {
struct LpNu { double p; };            // p > 0 (p < 1 is the quasi-norm)
struct LpDx { double p; };            // p > 0
struct GradL2 {};
struct Vp { double p; };              // p >= 1
struct QuasiLdelta { double delta; }; // delta in (0,1)
struct ParabolicHolder { double alpha; }; // alpha in (0,1]
} // namespace norm_kind

struct NormKind {
  std::variant<norm_kind::LpNu, norm_kind::LpDx, norm_kind::GradL2, norm_kind::Vp,
               norm_kind::QuasiLdelta, norm_kind::ParabolicHolder>
      tag;

  void validate() const;
  // spatial kinds only; ParabolicHolder rejects a single snapshot
  double evaluate(const Field& f, const WeightContext& ctx) const;
  // series kinds; spatial kinds apply to every snapshot and take the sup
  double evaluate(const FieldSeries& s, const WeightContext& ctx) const;
};

// Two-sided truncation to [1/k, k] and its complement; T_k(f) + G_k(f) = f
// exactly.  Requires k >= 1 and f >= 0.
double truncate_value(double s, double k);
double complement_value(double s, double k);
Field truncate(const Field& f, double k);
Field complement(const Field& f, double k);

// Restriction window for series functionals; unset bounds are unbounded.
struct SeriesWindow {
  std::optional<double> t_lo, t_hi;
  std::optional<double> x_lo, x_hi;
};

struct HolderOptions {
  std::uint64_t pair_budget = 1'000'000;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  SeriesWindow window;
};

// Budgeted estimate of the parabolic Hoelder seminorm
//   sup |f(t,x)-f(s,y)| / (|t-s|^{alpha/2} + |x-y|^alpha).
// Exhaustive when the pair count fits the budget; otherwise a strided
// sub-lattice is scanned exhaustively and topped up with seeded random pairs.
// Always a lower bound on the true seminorm.  alpha <= 1 is the classical
// range; larger alpha is accepted as a divergence diagnostic for kinks.
double parabolic_holder_seminorm(const FieldSeries& series, double alpha,
                                 const HolderOptions& opts = {});

namespace detail {
// serial reference for the pair scan, kept for kernel testing
double holder_scan_reference(const FieldSeries& series, double alpha, const HolderOptions& opts);
} // namespace detail

} // namespace qldiff
