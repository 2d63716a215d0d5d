#include "photonef/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace photonef {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct SpinorFft::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

SpinorFft::SpinorFft(const QGrid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  std::vector<int> n;
  for (const auto& a : grid.axes()) n.push_back(int(a.n_points));
  Eigen::Matrix2Xcd buf(2, grid.size());
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans_->fwd = fftw_plan_many_dft(int(n.size()), n.data(), 2, p, n.data(), 2, 1, p, n.data(), 2, 1,
                                     FFTW_FORWARD, flags);
    plans_->bwd = fftw_plan_many_dft(int(n.size()), n.data(), 2, p, n.data(), 2, 1, p, n.data(), 2, 1,
                                     FFTW_BACKWARD, flags);
  }

  for (std::size_t d = 0; d < grid.dims(); ++d) {
    const Axis& a = grid.axis(d);
    const std::size_t N = a.n_points;
    const double dk = 2.0 * M_PI / (double(N) * a.spacing());
    Eigen::ArrayXd k(grid.size());
    for (std::size_t f = 0; f < grid.size(); ++f) {
      const std::size_t j = grid.index(f, d);
      k[f] = dk * (j <= N / 2 ? double(j) : double(j) - double(N));
    }
    k_.push_back(k);
    nyquist_.push_back(N % 2 == 0);
  }
}

SpinorFft::~SpinorFft() = default;

void SpinorFft::forward(Eigen::Matrix2Xcd& data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->fwd, p, p);
}

void SpinorFft::backward(Eigen::Matrix2Xcd& data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->bwd, p, p);
  data /= double(grid_.size());
}

Eigen::ArrayXd SpinorFft::k_squared() const {
  Eigen::ArrayXd k2 = Eigen::ArrayXd::Zero(grid_.size());
  for (const auto& k : k_) k2 += k.square();
  return k2;
}

Eigen::Matrix2Xcd SpinorFft::derivative(const Eigen::Matrix2Xcd& data, std::size_t d, int order) const {
  Eigen::Matrix2Xcd out = data;
  forward(out);
  const Eigen::ArrayXd& k = k_.at(d);
  const std::size_t N = grid_.axis(d).n_points;
  for (Eigen::Index f = 0; f < out.cols(); ++f) {
    std::complex<double> m;
    if (order == 1) {
      // the Nyquist mode has no odd partner
      const bool nyq = nyquist_[d] && grid_.index(std::size_t(f), d) == N / 2;
      m = nyq ? 0.0 : std::complex<double>(0.0, k[f]);
    } else {
      m = -k[f] * k[f];
    }
    out.col(f) *= m;
  }
  backward(out);
  return out;
}

}  // namespace photonef
