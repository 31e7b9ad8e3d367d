#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace qldiff {

// Strictly increasing positive nodes x_0 < ... < x_M, at least 3 of them.
class Grid {
 public:
  explicit Grid(std::vector<double> nodes);

  const std::vector<double>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  double a() const { return nodes_.front(); }
  double b() const { return nodes_.back(); }
  double max_spacing() const;
  double min_spacing() const;

 private:
  std::vector<double> nodes_;
};

using GridPtr = std::shared_ptr<const Grid>;

// nodes x_j = a + (b-a) (j/M)^grading, j = 0..count-1.  grading = 1 is
// uniform; grading > 1 clusters nodes near a, the degenerate side.
GridPtr make_graded_grid(double a, double b, int count, double grading = 1.0);

// Spatial profile sampled on a grid.
struct Field {
  GridPtr grid;
  std::vector<double> values;

  Field() = default;
  Field(GridPtr g, std::vector<double> v);
  static Field zeros(GridPtr g);

  std::size_t size() const { return values.size(); }
};

// Time-indexed snapshots on one shared grid; times strictly increasing with
// times[0] = 0.  Snapshot data is stored row-major (time major).
class FieldSeries {
 public:
  FieldSeries(GridPtr grid, std::vector<double> times);

  void set_snapshot(std::size_t k, std::span<const double> values);
  void push_snapshot(std::span<const double> values); // fills in time order

  const GridPtr& grid() const { return grid_; }
  const std::vector<double>& times() const { return times_; }
  std::size_t snapshot_count() const { return filled_; }
  std::size_t node_count() const { return grid_->size(); }

  std::span<const double> snapshot(std::size_t k) const;
  std::span<double> snapshot(std::size_t k);
  Field snapshot_field(std::size_t k) const;
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

 private:
  GridPtr grid_;
  std::vector<double> times_;
  std::vector<double> data_;
  std::size_t filled_ = 0;
};

// Interior: 3-point second difference on nonuniform spacing (exact for
// quadratics).  Endpoint entries copy the adjacent interior value; they are
// diagnostic only and never enter a solve (Dirichlet rows replace them).
Field laplacian_nonuniform(const Field& f);
void laplacian_nonuniform(std::span<const double> x, std::span<const double> u,
                          std::span<double> out);

// Central differences in the interior, one-sided at the endpoints; exact for
// affine profiles.
Field gradient(const Field& f);
void gradient(std::span<const double> x, std::span<const double> u, std::span<double> out);

// Centered differences in time at interior samples, one-sided at the ends.
FieldSeries time_derivative(const FieldSeries& series);

// CSV with header "t,x,u", one row per (time, node), 17 significant digits.
void write_csv(const FieldSeries& series, std::ostream& os);
void write_csv(const FieldSeries& series, const std::string& path);
FieldSeries read_csv(std::istream& is);
FieldSeries read_csv_file(const std::string& path);

} // namespace qldiff
