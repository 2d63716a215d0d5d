#include "photonef/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace photonef {

std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m) {
  // Fornberg (1988)
  const int n = int(x.size()) - 1;
  std::vector<std::vector<double>> c(x.size(), std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = c[i][m];
  return w;
}

Eigen::ArrayXd fd_derivative(const Eigen::ArrayXd& f, const QGrid& grid, std::size_t d, int m, int order) {
  const std::size_t n = grid.axis(d).n_points;
  const double h = grid.axis(d).spacing();
  const std::size_t width = std::min<std::size_t>(std::size_t(order + m), n);
  const std::size_t half = width / 2;

  // one weight set per start offset
  std::vector<std::vector<double>> weights(n);
  std::vector<std::size_t> start(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t s = i >= half ? i - half : 0;
    s = std::min(s, n - width);
    start[i] = s;
    std::vector<double> nodes(width);
    for (std::size_t j = 0; j < width; ++j) nodes[j] = (double(s + j) - double(i)) * h;
    weights[i] = fd_weights(0.0, nodes, m);
  }

  const std::size_t st = grid.stride(d);
  Eigen::ArrayXd out(f.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const std::size_t i = grid.index(k, d);
    const std::size_t base = k - i * st;
    double acc = 0.0;
    for (std::size_t j = 0; j < width; ++j) acc += weights[i][j] * f[base + (start[i] + j) * st];
    out[k] = acc;
  }
  return out;
}

double wrap_phase(double x) {
  x = std::remainder(x, 2.0 * M_PI);
  return x == -M_PI ? M_PI : x;
}

}  // namespace photonef
