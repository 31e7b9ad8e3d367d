#include "qldiff/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace qldiff {

double bump_value(double x, double center, double radius) {
  const double s = (x - center) / radius;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double smoothstep_value(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

namespace {

double need(const std::map<std::string, double>& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw std::invalid_argument("profile: missing parameter '" + key + "'");
  return it->second;
}

double get_or(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

} // namespace

Profile make_u0_profile(const std::string& name, const std::map<std::string, double>& params) {
  Profile prof;
  prof.name = name;
  prof.params = params;
  if (name == "zero") {
    prof.fn = [](double) { return 0.0; };
  } else if (name == "bump") {
    const double c = need(params, "center");
    const double r = need(params, "radius");
    const double A = get_or(params, "amplitude", 1.0);
    if (!(r > 0.0) || A < 0.0) throw std::invalid_argument("bump: bad parameters");
    prof.fn = [c, r, A](double x) { return A * bump_value(x, c, r); };
  } else if (name == "plateau") {
    const double lo = need(params, "left");
    const double hi = need(params, "right");
    const double w = need(params, "shoulder");
    const double A = get_or(params, "amplitude", 1.0);
    if (!(lo < hi) || !(w > 0.0) || A < 0.0) throw std::invalid_argument("plateau: bad parameters");
    prof.fn = [lo, hi, w, A](double x) {
      return A * smoothstep_value((x - lo) / w) * smoothstep_value((hi - x) / w);
    };
  } else if (name == "seplog") {
    const double mu = need(params, "mu");
    const double gamma = need(params, "gamma");
    if (!(mu > 0.0) || !(gamma >= 0.0)) throw std::invalid_argument("seplog: bad parameters");
    prof.fn = [mu, gamma](double x) {
      if (!(x > 0.0)) return 0.0;
      const double v = mu * (std::log(x) - gamma * x);
      return v > 0.0 ? v : 0.0;
    };
  } else {
    throw std::invalid_argument("unknown u0 profile '" + name + "'");
  }
  return prof;
}

Profile make_g_profile(const std::string& name, const std::map<std::string, double>& params) {
  Profile prof;
  prof.name = name;
  prof.params = params;
  if (name == "zero") {
    prof.fn = [](double) { return 0.0; };
  } else if (name == "gbump") {
    const double c = need(params, "center");
    const double r = need(params, "radius");
    const double A = get_or(params, "amplitude", 1.0);
    if (!(r > 0.0)) throw std::invalid_argument("gbump: bad parameters");
    prof.fn = [c, r, A](double x) { return A * bump_value(x, c, r); };
  } else if (name == "gdip") {
    const double pc = need(params, "pos_center");
    const double pr = need(params, "pos_radius");
    const double pa = need(params, "pos_amplitude");
    const double dc = need(params, "dip_center");
    const double dr = need(params, "dip_radius");
    const double depth = need(params, "depth");
    if (!(pr > 0.0) || !(dr > 0.0) || !(depth >= 0.0) || pa < 0.0)
      throw std::invalid_argument("gdip: bad parameters");
    prof.fn = [pc, pr, pa, dc, dr, depth](double x) {
      return pa * bump_value(x, pc, pr) - depth * bump_value(x, dc, dr);
    };
  } else {
    throw std::invalid_argument("unknown g profile '" + name + "'");
  }
  return prof;
}

std::vector<std::string> u0_profile_names() { return {"zero", "bump", "plateau", "seplog"}; }
std::vector<std::string> g_profile_names() { return {"zero", "gbump", "gdip"}; }

void ProblemSpec::validate(double lo, double hi, int samples) const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("ProblemSpec: lambda must be >= 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("ProblemSpec: need 0 < T < inf");
  if (theta < 0.0) throw std::invalid_argument("ProblemSpec: theta must be >= 0");
  if (!u0.fn || !g0rho.fn) throw std::invalid_argument("ProblemSpec: missing data profiles");
  for (int i = 0; i <= samples; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / samples;
    if (x <= 0.0) continue;
    if (u0(x) < 0.0) throw std::invalid_argument("ProblemSpec: u0 is negative somewhere");
    if (g0rho(x) < -theta * (1.0 + 1e-12))
      throw std::invalid_argument("ProblemSpec: rho*g0 dips below -theta");
  }
}

} // namespace qldiff
