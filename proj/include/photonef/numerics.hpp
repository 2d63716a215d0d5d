#pragma once

#include <vector>

#include <Eigen/Dense>

#include "photonef/grid.hpp"

namespace photonef {

// Finite-difference weights for derivative m at x0 on the given nodes (Fornberg).
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int m);

// d^m f / dq_d^m with a width-(order+1) stencil, shifted one-sided near edges
Eigen::ArrayXd fd_derivative(const Eigen::ArrayXd& f, const QGrid& grid, std::size_t d, int m,
                             int order = 8);

// wrap to (-pi, pi]
double wrap_phase(double x);

}  // namespace photonef
