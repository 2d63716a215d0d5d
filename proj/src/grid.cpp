#include "photonef/grid.hpp"

#include <cmath>
#include <string>

#include "photonef/errors.hpp"

namespace photonef {

QGrid::QGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 2)
    throw ConfigError("grid must have 1 or 2 axes, got " + std::to_string(axes_.size()));
  size_ = 1;
  for (const auto& a : axes_) {
    if (a.n_points < 16) throw ConfigError("grid axis needs at least 16 points");
    if (!(a.q_max > a.q_min) || !std::isfinite(a.q_min) || !std::isfinite(a.q_max))
      throw ConfigError("grid axis must have q_max > q_min");
    if (std::abs(a.q_max + a.q_min) > 1e-12 * (a.q_max - a.q_min))
      throw ConfigError("grid axis must be symmetric about q = 0");
    size_ *= a.n_points;
  }
}

QGrid QGrid::symmetric(double half_width, std::size_t n) {
  return QGrid({Axis{-half_width, half_width, n}});
}

QGrid QGrid::symmetric(const std::vector<double>& half_width, const std::vector<std::size_t>& n) {
  if (half_width.size() != n.size()) throw ConfigError("half_width and n_points differ in length");
  std::vector<Axis> axes;
  for (std::size_t d = 0; d < n.size(); ++d) axes.push_back(Axis{-half_width[d], half_width[d], n[d]});
  return QGrid(std::move(axes));
}

double QGrid::cell_volume() const {
  double v = 1.0;
  for (const auto& a : axes_) v *= a.spacing();
  return v;
}

std::size_t QGrid::stride(std::size_t d) const {
  std::size_t s = 1;
  for (std::size_t e = d + 1; e < axes_.size(); ++e) s *= axes_[e].n_points;
  return s;
}

std::size_t QGrid::flat(std::size_t i0, std::size_t i1) const {
  return axes_.size() == 1 ? i0 : i0 * axes_[1].n_points + i1;
}

Eigen::ArrayXd QGrid::coordinates(std::size_t d) const {
  Eigen::ArrayXd q(size_);
  const Axis& a = axes_.at(d);
  for (std::size_t k = 0; k < size_; ++k) q[k] = a.coord(index(k, d));
  return q;
}

std::optional<std::size_t> QGrid::zero_index(std::size_t d) const {
  const Axis& a = axes_.at(d);
  if (a.n_points % 2 == 0) return std::nullopt;
  return (a.n_points - 1) / 2;
}

bool QGrid::operator==(const QGrid& o) const {
  if (axes_.size() != o.axes_.size()) return false;
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    if (axes_[d].n_points != o.axes_[d].n_points || axes_[d].q_min != o.axes_[d].q_min ||
        axes_[d].q_max != o.axes_[d].q_max)
      return false;
  }
  return true;
}

}  // namespace photonef
