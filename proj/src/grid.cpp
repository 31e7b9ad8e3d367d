#include "qldiff/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qldiff {

Grid::Grid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 3) throw std::invalid_argument("Grid: need at least 3 nodes");
  if (nodes_.front() <= 0.0) throw std::invalid_argument("Grid: nodes must be positive");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw std::invalid_argument("Grid: nodes must be strictly increasing");
}

double Grid::max_spacing() const {
  double h = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) h = std::max(h, nodes_[i] - nodes_[i - 1]);
  return h;
}

double Grid::min_spacing() const {
  double h = nodes_[1] - nodes_[0];
  for (std::size_t i = 2; i < nodes_.size(); ++i) h = std::min(h, nodes_[i] - nodes_[i - 1]);
  return h;
}

GridPtr make_graded_grid(double a, double b, int count, double grading) {
  if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("make_graded_grid: need 0 < a < b");
  if (count < 3) throw std::invalid_argument("make_graded_grid: need count >= 3");
  if (!(grading >= 1.0)) throw std::invalid_argument("make_graded_grid: need grading >= 1");
  const int M = count - 1;
  std::vector<double> x(static_cast<std::size_t>(count));
  for (int j = 0; j <= M; ++j)
    x[static_cast<std::size_t>(j)] =
        a + (b - a) * std::pow(static_cast<double>(j) / M, grading);
  x.front() = a;
  x.back() = b;
  return std::make_shared<Grid>(std::move(x));
}

Field::Field(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid || values.size() != grid->size())
    throw std::invalid_argument("Field: value/node length mismatch");
}

Field Field::zeros(GridPtr g) {
  std::vector<double> v(g->size(), 0.0);
  return Field(std::move(g), std::move(v));
}

FieldSeries::FieldSeries(GridPtr grid, std::vector<double> times)
    : grid_(std::move(grid)), times_(std::move(times)) {
  if (!grid_) throw std::invalid_argument("FieldSeries: null grid");
  if (times_.empty()) throw std::invalid_argument("FieldSeries: no times");
  if (times_.front() != 0.0) throw std::invalid_argument("FieldSeries: times must start at 0");
  for (std::size_t k = 1; k < times_.size(); ++k)
    if (!(times_[k] > times_[k - 1]))
      throw std::invalid_argument("FieldSeries: times must be strictly increasing");
  data_.assign(times_.size() * grid_->size(), 0.0);
}

void FieldSeries::set_snapshot(std::size_t k, std::span<const double> values) {
  if (k >= times_.size()) throw std::out_of_range("FieldSeries: snapshot index");
  if (values.size() != grid_->size())
    throw std::invalid_argument("FieldSeries: snapshot length mismatch");
  std::copy(values.begin(), values.end(), data_.begin() + static_cast<long>(k * grid_->size()));
  filled_ = std::max(filled_, k + 1);
}

void FieldSeries::push_snapshot(std::span<const double> values) { set_snapshot(filled_, values); }

std::span<const double> FieldSeries::snapshot(std::size_t k) const {
  return std::span<const double>(data_).subspan(k * grid_->size(), grid_->size());
}

std::span<double> FieldSeries::snapshot(std::size_t k) {
  if (k >= times_.size()) throw std::out_of_range("FieldSeries: snapshot index");
  filled_ = std::max(filled_, k + 1); // a mutable view counts as written
  return std::span<double>(data_).subspan(k * grid_->size(), grid_->size());
}

Field FieldSeries::snapshot_field(std::size_t k) const {
  auto s = snapshot(k);
  return Field(grid_, std::vector<double>(s.begin(), s.end()));
}

void laplacian_nonuniform(std::span<const double> x, std::span<const double> u,
                          std::span<double> out) {
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("laplacian_nonuniform: need >= 3 nodes");
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = x[i] - x[i - 1];
    const double hp = x[i + 1] - x[i];
    out[i] = 2.0 * (hm * u[i + 1] - (hm + hp) * u[i] + hp * u[i - 1]) / (hm * hp * (hm + hp));
  }
  out[0] = out[1];
  out[n - 1] = out[n - 2];
}

Field laplacian_nonuniform(const Field& f) {
  Field out = Field::zeros(f.grid);
  laplacian_nonuniform(f.grid->nodes(), f.values, out.values);
  return out;
}

void gradient(std::span<const double> x, std::span<const double> u, std::span<double> out) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("gradient: need >= 2 nodes");
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (u[i + 1] - u[i - 1]) / (x[i + 1] - x[i - 1]);
  out[0] = (u[1] - u[0]) / (x[1] - x[0]);
  out[n - 1] = (u[n - 1] - u[n - 2]) / (x[n - 1] - x[n - 2]);
}

Field gradient(const Field& f) {
  Field out = Field::zeros(f.grid);
  gradient(f.grid->nodes(), f.values, out.values);
  return out;
}

FieldSeries time_derivative(const FieldSeries& series) {
  const std::size_t K = series.snapshot_count();
  if (K < 2) throw std::invalid_argument("time_derivative: need >= 2 snapshots");
  const std::size_t M = series.node_count();
  const auto& t = series.times();
  FieldSeries out(series.grid(), std::vector<double>(t.begin(), t.begin() + static_cast<long>(K)));
  for (std::size_t k = 0; k < K; ++k) {
    auto d = out.snapshot(k);
    if (k == 0) {
      auto u0 = series.snapshot(0), u1 = series.snapshot(1);
      const double dt = t[1] - t[0];
      for (std::size_t i = 0; i < M; ++i) d[i] = (u1[i] - u0[i]) / dt;
    } else if (k + 1 == K) {
      auto u0 = series.snapshot(K - 2), u1 = series.snapshot(K - 1);
      const double dt = t[K - 1] - t[K - 2];
      for (std::size_t i = 0; i < M; ++i) d[i] = (u1[i] - u0[i]) / dt;
    } else {
      auto um = series.snapshot(k - 1), up = series.snapshot(k + 1);
      const double dt2 = t[k + 1] - t[k - 1];
      for (std::size_t i = 0; i < M; ++i) d[i] = (up[i] - um[i]) / dt2;
    }
  }
  return out;
}

void write_csv(const FieldSeries& series, std::ostream& os) {
  os << "t,x,u\n";
  char buf[96];
  const auto& x = series.grid()->nodes();
  for (std::size_t k = 0; k < series.snapshot_count(); ++k) {
    auto u = series.snapshot(k);
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", series.times()[k], x[i], u[i]);
      os << buf;
    }
  }
}

void write_csv(const FieldSeries& series, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_csv: cannot open " + path);
  write_csv(series, os);
}

FieldSeries read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("t,x,u", 0) != 0)
    throw std::runtime_error("read_csv: missing t,x,u header");
  std::vector<double> times;
  std::vector<double> nodes;
  std::vector<double> values;
  bool first_block = true;
  double cur_t = 0.0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double t, x, u;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &t, &x, &u) != 3)
      throw std::runtime_error("read_csv: bad row: " + line);
    if (times.empty() || t != cur_t) {
      times.push_back(t);
      cur_t = t;
      first_block = times.size() == 1;
    }
    if (first_block) nodes.push_back(x);
    values.push_back(u);
  }
  if (times.empty()) throw std::runtime_error("read_csv: no data rows");
  if (values.size() != times.size() * nodes.size())
    throw std::runtime_error("read_csv: ragged data");
  FieldSeries out(std::make_shared<Grid>(nodes), times);
  for (std::size_t k = 0; k < times.size(); ++k)
    out.set_snapshot(k, std::span<const double>(values).subspan(k * nodes.size(), nodes.size()));
  return out;
}

FieldSeries read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_csv: cannot open " + path);
  return read_csv(is);
}

} // namespace qldiff
