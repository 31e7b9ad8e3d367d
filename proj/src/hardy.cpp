#include "qldiff/hardy.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace qldiff {

namespace {

bool feq(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

double conjugate(double p) { return p > 1.0 ? p / (p - 1.0) : infinity; }

struct Limits {
  double at0 = 0.0;
  double atb = 0.0;
};

// endpoint limits of F_L, exact by case analysis
Limits analytic_limits(const EmbeddingQuery& qr) {
  Limits lim;
  const bool binf = std::isinf(qr.b);
  if (qr.lambda == 0.0) {
    if (qr.p == 1.0) {
      lim.at0 = infinity;
      lim.atb = 0.0;
      return lim;
    }
    const double e0 = (qr.p - 1.0) / qr.p - 1.0 / qr.q;
    lim.at0 = e0 > 1e-14 ? 0.0 : (std::abs(e0) <= 1e-14 ? 1.0 : infinity);
    if (!binf)
      lim.atb = 0.0;
    else
      lim.atb = e0 > 1e-14 ? infinity : (std::abs(e0) <= 1e-14 ? 1.0 : 0.0);
    return lim;
  }
  // lambda > 0
  WeightContext ctx(qr.lambda);
  if (qr.p == 1.0) {
    lim.at0 = std::pow(nu_interval(ctx, 1e-300, qr.b), 1.0 / qr.q);
    lim.atb = 0.0;
    return lim;
  }
  lim.at0 = 0.0;
  if (!binf) {
    lim.atb = 0.0;
  } else {
    const double s = qr.q * (qr.p - 1.0) / qr.p;
    lim.atb = s > 1.0 + 1e-14 ? infinity : (std::abs(s - 1.0) <= 1e-14 ? 1.0 : 0.0);
  }
  return lim;
}

// log-spaced scan followed by golden-section refinement around the best sample
double numeric_sup(const EmbeddingQuery& qr, const Limits& lim) {
  if (std::isinf(lim.at0) || std::isinf(lim.atb)) return infinity;
  const bool binf = std::isinf(qr.b);
  const double scale = std::max(1.0, qr.lambda);
  const double lo = binf ? 1e-9 * scale : qr.b * 1e-9;
  const double hi = binf ? 1e12 * scale : qr.b * (1.0 - 1e-9);

  const int npts = 512;
  const double llo = std::log(lo), lhi = std::log(hi);
  double best = 0.0;
  int best_i = 0;
  for (int i = 0; i <= npts; ++i) {
    const double x = std::exp(llo + (lhi - llo) * static_cast<double>(i) / npts);
    const double v = modulus_F_L(x, qr);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  auto at = [&](double li) { return modulus_F_L(std::exp(li), qr); };
  double a = llo + (lhi - llo) * std::max(0, best_i - 1) / static_cast<double>(npts);
  double b = llo + (lhi - llo) * std::min(npts, best_i + 1) / static_cast<double>(npts);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = at(c), fd = at(d);
  for (int it = 0; it < 80; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = at(d);
    }
  }
  best = std::max({best, fc, fd, lim.at0, lim.atb});
  return best;
}

// admissible exponent ranges of the classification theorems
void classify(const EmbeddingQuery& qr, EmbeddingVerdict& v) {
  const bool binf = std::isinf(qr.b);
  const double pc = conjugate(qr.p);
  if (qr.lambda == 0.0) {
    if (binf) {
      v.continuous = qr.p > 1.0 && feq(qr.q, pc);
      v.compact = false;
    } else {
      v.continuous = qr.p > 1.0 && (qr.q > pc || feq(qr.q, pc));
      v.compact = qr.p > 1.0 && qr.q > pc && !feq(qr.q, pc);
    }
    return;
  }
  if (!binf) {
    v.continuous = true;
    v.compact = true;
    return;
  }
  v.continuous = qr.p == 1.0 || (qr.p <= 2.0 && (qr.q < pc || feq(qr.q, pc)));
  v.compact = qr.p > 1.0 && qr.p < 2.0 && qr.q > 2.0 && !feq(qr.q, 2.0) && qr.q < pc &&
              !feq(qr.q, pc);
}

} // namespace

void EmbeddingQuery::validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("EmbeddingQuery: lambda must be >= 0");
  if (!(p >= 1.0)) throw std::invalid_argument("EmbeddingQuery: need p >= 1");
  if (!(q >= p) || std::isinf(q)) throw std::invalid_argument("EmbeddingQuery: need p <= q < inf");
  if (!(b > 0.0)) throw std::invalid_argument("EmbeddingQuery: need b > 0");
}

double modulus_F_L(double x, const EmbeddingQuery& query) {
  query.validate();
  if (!(x > 0.0) || !(x < query.b)) throw std::invalid_argument("modulus_F_L: x outside (0,b)");
  WeightContext ctx(query.lambda);
  const double tail = std::pow(nu_interval(ctx, x, query.b), 1.0 / query.q);
  if (query.p == 1.0) return tail;
  return tail * std::pow(x, (query.p - 1.0) / query.p);
}

EmbeddingVerdict verdict(const EmbeddingQuery& query) {
  query.validate();
  EmbeddingVerdict v;
  const Limits lim = analytic_limits(query);
  v.limit_at_0 = lim.at0;
  v.limit_at_b = lim.atb;
  v.sup_F = numeric_sup(query, lim);
  classify(query, v);

  const bool modulus_cont = std::isfinite(v.sup_F);
  const bool modulus_comp = modulus_cont && lim.at0 == 0.0 && lim.atb == 0.0;
  if (modulus_cont != v.continuous || modulus_comp != v.compact) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "modulus criterion disagrees: sup-finite=%d limits-zero=%d vs "
                  "continuous=%d compact=%d",
                  modulus_cont, modulus_comp, v.continuous, v.compact);
    v.consistency = buf;
  }
  return v;
}

std::vector<LatticeEntry> verdict_lattice(const std::vector<double>& lambdas,
                                          const std::vector<double>& ps,
                                          const std::vector<double>& qs,
                                          const std::vector<double>& bs) {
  std::vector<LatticeEntry> out;
  for (double l : lambdas)
    for (double p : ps)
      for (double q : qs) {
        if (q < p) continue;
        for (double b : bs) {
          EmbeddingQuery qr{l, p, q, b};
          out.push_back({qr, verdict(qr)});
        }
      }
  return out;
}

std::string sweep_csv(const std::vector<LatticeEntry>& entries, int samples) {
  std::string out = "lambda,p,q,b,x,F_L\n";
  char buf[192];
  for (const auto& e : entries) {
    const bool binf = std::isinf(e.query.b);
    const double scale = std::max(1.0, e.query.lambda);
    const double lo = binf ? 1e-6 * scale : e.query.b * 1e-6;
    const double hi = binf ? 1e6 * scale : e.query.b * (1.0 - 1e-6);
    for (int i = 0; i <= samples; ++i) {
      const double x =
          std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / samples);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", e.query.lambda,
                    e.query.p, e.query.q, e.query.b, x, modulus_F_L(x, e.query));
      out += buf;
    }
  }
  return out;
}

std::string lattice_csv(const std::vector<LatticeEntry>& entries) {
  std::string out = "lambda,p,q,b,sup_F,lim0,limb,continuous,compact\n";
  char buf[256];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\n",
                  e.query.lambda, e.query.p, e.query.q, e.query.b, e.verdict.sup_F,
                  e.verdict.limit_at_0, e.verdict.limit_at_b, e.verdict.continuous ? 1 : 0,
                  e.verdict.compact ? 1 : 0);
    out += buf;
  }
  return out;
}

} // namespace qldiff
