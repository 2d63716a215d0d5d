#pragma once

#include <memory>

#include <Eigen/Dense>

#include "photonef/grid.hpp"

namespace photonef {

// In-place FFT of both spinor components over the whole grid (FFTW).
class SpinorFft {
 public:
  explicit SpinorFft(const QGrid& grid);
  ~SpinorFft();
  SpinorFft(const SpinorFft&) = delete;
  SpinorFft& operator=(const SpinorFft&) = delete;

  void forward(Eigen::Matrix2Xcd& data) const;
  // includes the 1/N normalisation
  void backward(Eigen::Matrix2Xcd& data) const;

  // angular wavenumber along axis d at every flat point (Nyquist mode kept positive)
  const Eigen::ArrayXd& wavenumbers(std::size_t d) const { return k_.at(d); }
  // |k|^2 summed over axes
  Eigen::ArrayXd k_squared() const;
  const QGrid& grid() const { return grid_; }

  // spectral derivative along axis d; order 1 or 2
  Eigen::Matrix2Xcd derivative(const Eigen::Matrix2Xcd& data, std::size_t d, int order) const;

 private:
  struct Plans;
  QGrid grid_;
  std::unique_ptr<Plans> plans_;
  std::vector<Eigen::ArrayXd> k_;
  std::vector<bool> nyquist_;
};

}  // namespace photonef
