#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "qldiff/norms.hpp"

using namespace qldiff;

namespace {

Field constant_field(GridPtr grid, double c) {
  Field f = Field::zeros(grid);
  for (double& v : f.values) v = c;
  return f;
}

} // namespace

TEST_CASE("lp_nu closed forms") {
  WeightContext ctx(0.0);
  auto grid = make_graded_grid(1.0, 2.0, 101, 1.0);
  const Field one = constant_field(grid, 1.0);
  // nu_0((1,2)) = 1/2
  CHECK(lp_nu(one, 1.0, ctx) == doctest::Approx(0.5).epsilon(1e-13));
  const Field c = constant_field(grid, 3.7);
  for (double p : {0.5, 1.0, 2.0, 3.0})
    CHECK(lp_nu(c, p, ctx) == doctest::Approx(3.7 * std::pow(0.5, 1.0 / p)).epsilon(1e-12));
  CHECK_THROWS_AS(lp_nu(one, 0.0, ctx), std::invalid_argument);
}

TEST_CASE("quasi-triangle inequality for the delta = 1/2 quasi-norm") {
  WeightContext ctx(1.0);
  auto grid = make_graded_grid(0.5, 4.0, 64, 1.2);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  const double delta = 0.5;
  const double factor = std::pow(2.0, (1.0 - delta) / delta); // = 2
  CHECK(factor == doctest::Approx(2.0));
  for (int it = 0; it < 50; ++it) {
    Field f = Field::zeros(grid), g = Field::zeros(grid), sum = Field::zeros(grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
      f.values[i] = dist(rng);
      g.values[i] = dist(rng);
      sum.values[i] = f.values[i] + g.values[i];
    }
    CHECK(lp_nu(sum, delta, ctx) <=
          factor * (lp_nu(f, delta, ctx) + lp_nu(g, delta, ctx)) * (1.0 + 1e-12));
  }
}

TEST_CASE("lp_nu triangle inequality and homogeneity for p >= 1") {
  WeightContext ctx(0.3);
  auto grid = make_graded_grid(0.4, 3.0, 48, 1.0);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    for (int it = 0; it < 20; ++it) {
      Field f = Field::zeros(grid), g = Field::zeros(grid), sum = Field::zeros(grid);
      for (std::size_t i = 0; i < f.size(); ++i) {
        f.values[i] = dist(rng);
        g.values[i] = dist(rng);
        sum.values[i] = f.values[i] + g.values[i];
      }
      CHECK(lp_nu(sum, p, ctx) <= (lp_nu(f, p, ctx) + lp_nu(g, p, ctx)) * (1.0 + 1e-12));
      Field scaled = f;
      for (double& v : scaled.values) v *= -3.5;
      CHECK(lp_nu(scaled, p, ctx) == doctest::Approx(3.5 * lp_nu(f, p, ctx)).epsilon(1e-12));
    }
  }
}

TEST_CASE("grad_l2 closed forms") {
  auto grid = make_graded_grid(1.0, 3.0, 201, 1.0);
  Field aff = Field::zeros(grid), cst = Field::zeros(grid);
  for (std::size_t i = 0; i < aff.size(); ++i) aff.values[i] = -2.0 * grid->nodes()[i] + 1.0;
  CHECK(grad_l2(aff) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(grad_l2(cst) == doctest::Approx(0.0));

  auto grid01 = make_graded_grid(1e-4, 1.0, 2001, 1.0);
  Field sq = Field::zeros(grid01);
  for (std::size_t i = 0; i < sq.size(); ++i)
    sq.values[i] = grid01->nodes()[i] * grid01->nodes()[i];
  CHECK(grad_l2(sq) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-4));
}

TEST_CASE("truncation pair") {
  CHECK(truncate_value(3.0, 2.0) == 2.0);
  CHECK(truncate_value(1.0, 2.0) == 1.0);
  CHECK(truncate_value(0.1, 2.0) == 0.5);
  CHECK(complement_value(3.0, 2.0) == 1.0);
  CHECK(complement_value(0.1, 2.0) == doctest::Approx(-0.4));
  CHECK_THROWS_AS(truncate_value(1.0, 0.5), std::invalid_argument);

  auto grid = make_graded_grid(0.5, 5.0, 60, 1.1);
  std::mt19937_64 rng(77);
  // dyadic lattice values make the identity checkable bitwise: every
  // difference against k = 2 or 1/k = 1/2 is exact in binary
  std::uniform_int_distribution<int> lattice(0, 4 << 26);
  Field f = Field::zeros(grid);
  for (double& v : f.values) v = std::ldexp(static_cast<double>(lattice(rng)), -26);
  const double k = 2.0;
  const Field t = truncate(f, k), g = complement(f, k);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(t.values[i] + g.values[i] == f.values[i]); // exact identity
    CHECK(t.values[i] <= k);
    CHECK(t.values[i] >= 1.0 / k);
  }
  // values already inside [1/k, k] are untouched
  Field mid = Field::zeros(grid);
  for (double& v : mid.values) v = 1.0;
  const Field tm = truncate(mid, k), gm = complement(mid, k);
  for (std::size_t i = 0; i < mid.size(); ++i) {
    CHECK(tm.values[i] == 1.0);
    CHECK(gm.values[i] == 0.0);
  }
}

TEST_CASE("norm kinds dispatch and validate") {
  WeightContext ctx(0.0);
  auto grid = make_graded_grid(1.0, 2.0, 101, 1.0);
  Field f = Field::zeros(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = 3.0 * grid->nodes()[i];

  CHECK(NormKind{norm_kind::LpNu{2.0}}.evaluate(f, ctx) ==
        doctest::Approx(lp_nu(f, 2.0, ctx)));
  CHECK(NormKind{norm_kind::GradL2{}}.evaluate(f, ctx) == doctest::Approx(3.0));
  CHECK(NormKind{norm_kind::Vp{2.0}}.evaluate(f, ctx) ==
        doctest::Approx(lp_nu(f, 2.0, ctx) + 3.0));
  CHECK(NormKind{norm_kind::QuasiLdelta{0.5}}.evaluate(f, ctx) ==
        doctest::Approx(lp_nu(f, 0.5, ctx)));
  CHECK_THROWS_AS(NormKind{norm_kind::QuasiLdelta{1.5}}.evaluate(f, ctx),
                  std::invalid_argument);
  CHECK_THROWS_AS(NormKind{norm_kind::ParabolicHolder{1.5}}.validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(NormKind{norm_kind::ParabolicHolder{0.5}}.evaluate(f, ctx),
                  std::invalid_argument);

  FieldSeries s(grid, {0.0, 1.0});
  s.set_snapshot(0, f.values);
  s.set_snapshot(1, f.values);
  CHECK(NormKind{norm_kind::ParabolicHolder{1.0}}.evaluate(s, ctx) ==
        doctest::Approx(3.0)); // exact Lipschitz constant of 3x
  CHECK(NormKind{norm_kind::LpNu{1.0}}.evaluate(s, ctx) ==
        doctest::Approx(lp_nu(f, 1.0, ctx)));
}

TEST_CASE("gradient of a truncation vanishes deep in the cut region") {
  auto grid = make_graded_grid(1.0, 2.0, 101, 1.0);
  Field f = Field::zeros(grid);
  for (std::size_t i = 0; i < f.size(); ++i)
    f.values[i] = 10.0 * grid->nodes()[i]; // everywhere above k
  const Field t = truncate(f, 2.0);
  const Field g = gradient(t);
  for (std::size_t i = 1; i + 1 < f.size(); ++i) CHECK(g.values[i] == 0.0);
}

TEST_CASE("holder seminorm basics") {
  auto grid = make_graded_grid(1e-3, 1.0, 101, 1.0);
  std::vector<double> times{0.0, 0.1, 0.2};
  FieldSeries flat(grid, times), linear(grid, times);
  std::vector<double> row(grid->size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::fill(row.begin(), row.end(), 2.0);
    flat.set_snapshot(k, row);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = grid->nodes()[i];
    linear.set_snapshot(k, row);
  }
  CHECK(parabolic_holder_seminorm(flat, 0.5) == 0.0);
  // f(t,x) = x with alpha = 1: the ratio |dx| / |dx| = 1 is the exact
  // Lipschitz constant
  CHECK(parabolic_holder_seminorm(linear, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(parabolic_holder_seminorm(flat, 0.0), std::invalid_argument);
}

TEST_CASE("sampled holder scan is deterministic and matches the reference") {
  auto grid = make_graded_grid(0.5, 6.0, 150, 1.0);
  std::vector<double> times(30);
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = 0.05 * static_cast<double>(k);
  FieldSeries s(grid, times);
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> row(grid->size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t i = 0; i < row.size(); ++i)
      row[i] = std::sin(grid->nodes()[i] + times[k]) + 0.01 * dist(rng);
    s.set_snapshot(k, row);
  }
  HolderOptions opts;
  opts.pair_budget = 200'000; // forces sampling (4500 points -> ~10M pairs)
  const double a = parabolic_holder_seminorm(s, 0.5, opts);
  const double b = parabolic_holder_seminorm(s, 0.5, opts);
  CHECK(a == b);
  CHECK(a == detail::holder_scan_reference(s, 0.5, opts));
  // a budgeted scan is a lower bound on the exhaustive value
  HolderOptions full;
  full.pair_budget = 20'000'000;
  CHECK(a <= parabolic_holder_seminorm(s, 0.5, full) * (1.0 + 1e-12));
}

TEST_CASE("window restricts the scanned points") {
  auto grid = make_graded_grid(1.0, 4.0, 61, 1.0);
  std::vector<double> times{0.0, 1.0, 2.0};
  FieldSeries s(grid, times);
  std::vector<double> row(grid->size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t i = 0; i < row.size(); ++i)
      row[i] = grid->nodes()[i] < 2.0 ? 100.0 * times[k] : 0.0;
    s.set_snapshot(k, row);
  }
  HolderOptions opts;
  opts.window.x_lo = 2.5; // excludes the jumpy region
  CHECK(parabolic_holder_seminorm(s, 0.5, opts) == 0.0);
}
