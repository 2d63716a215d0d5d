#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace photonef {

struct Axis {
  double q_min = -20.0;
  double q_max = 20.0;
  std::size_t n_points = 513;

  double spacing() const { return (q_max - q_min) / double(n_points - 1); }
  double coord(std::size_t i) const { return q_min + double(i) * spacing(); }
};

// Tensor-product grid over 1 or 2 photon coordinates.  Points are
// flattened row-major: the last axis runs fastest.
class QGrid {
 public:
  QGrid() : QGrid(std::vector<Axis>{Axis{}}) {}
  explicit QGrid(std::vector<Axis> axes);

  static QGrid symmetric(double half_width, std::size_t n);
  static QGrid symmetric(const std::vector<double>& half_width, const std::vector<std::size_t>& n);

  std::size_t dims() const { return axes_.size(); }
  const Axis& axis(std::size_t d) const { return axes_.at(d); }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t size() const { return size_; }
  double cell_volume() const;

  // stride between neighbours along axis d in the flat index
  std::size_t stride(std::size_t d) const;
  std::size_t flat(std::size_t i0, std::size_t i1 = 0) const;
  // per-axis index of flat point k
  std::size_t index(std::size_t k, std::size_t d) const { return (k / stride(d)) % axes_[d].n_points; }

  // coordinate q_d at every flat point
  Eigen::ArrayXd coordinates(std::size_t d) const;
  // per-axis index of q = 0, if it is a node
  std::optional<std::size_t> zero_index(std::size_t d) const;

  bool operator==(const QGrid& o) const;
  bool operator!=(const QGrid& o) const { return !(*this == o); }

 private:
  std::vector<Axis> axes_;
  std::size_t size_ = 0;
};

}  // namespace photonef
