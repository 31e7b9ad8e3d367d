#pragma once

#include <string>
#include <vector>

#include "qldiff/weight.hpp"

namespace qldiff {

// Embedding L^q(0,b; d nu_lambda) <- gradients in L^p(0,b; dx), asked for the
// Hardy operator H_L on left-vanishing functions.  b may be +infinity.
struct EmbeddingQuery {
  double lambda = 0.0;
  double p = 1.0;
  double q = 1.0;
  double b = infinity;

  void validate() const; // 1 <= p <= q < inf
};

struct EmbeddingVerdict {
  bool continuous = false;
  bool compact = false;
  double sup_F = 0.0;    // numeric supremum of the modulus (inf when unbounded)
  double limit_at_0 = 0.0;
  double limit_at_b = 0.0;
  // Set when the numeric modulus criterion (sup finite / limits zero) and the
  // classification disagree; surfaced in reports, never hidden.
  std::string consistency;
};

// Left modulus function F_L(x) = nu_lambda((x,b))^{1/q} * x^{(p-1)/p}
// (the x-power drops out at p = 1).  Boundedness of F_L characterizes the
// inequality, vanishing endpoint limits characterize compactness.
double modulus_F_L(double x, const EmbeddingQuery& query);

// Classification verdict with numerically maximized modulus.  Booleans follow
// the admissible exponent ranges of the classification theorems; the raw
// modulus criterion is cross-checked and any mismatch lands in `consistency`.
EmbeddingVerdict verdict(const EmbeddingQuery& query);

struct LatticeEntry {
  EmbeddingQuery query;
  EmbeddingVerdict verdict;
};

std::vector<LatticeEntry> verdict_lattice(const std::vector<double>& lambdas,
                                          const std::vector<double>& ps,
                                          const std::vector<double>& qs,
                                          const std::vector<double>& bs);

// CSV columns: lambda,p,q,b,sup_F,lim0,limb,continuous,compact
std::string lattice_csv(const std::vector<LatticeEntry>& entries);

// Plot data: log-spaced F_L(x) sweeps, columns lambda,p,q,b,x,F_L.
std::string sweep_csv(const std::vector<LatticeEntry>& entries, int samples = 64);

} // namespace qldiff
