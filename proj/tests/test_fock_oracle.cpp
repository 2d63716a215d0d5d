#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "photonef/errors.hpp"
#include "photonef/fock_oracle.hpp"
#include "photonef/observables.hpp"

using namespace photonef;

namespace {
const QGrid kGrid = QGrid::symmetric(20.0, 513);
}

TEST_CASE("Hermite functions match the explicit series") {
  const Eigen::ArrayXd q = kGrid.coordinates(0);
  const Eigen::MatrixXd h = hermite_functions(q, 0.4, 12);
  for (int n = 0; n <= 12; ++n)
    for (Eigen::Index k = 0; k < q.size(); k += 7)
      CHECK(h(n, k) == doctest::Approx(oracle::ho_eigenfunction(n, 0.4, q[k])).epsilon(1e-9).scale(1e-12));
}

TEST_CASE("Hermite functions are orthonormal on the grid") {
  const Eigen::MatrixXd h = hermite_functions(kGrid.coordinates(0), 0.4, 40);
  const Eigen::MatrixXd o = h * h.transpose() * kGrid.cell_volume();
  CHECK((o - Eigen::MatrixXd::Identity(41, 41)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Fock Hamiltonian") {
  const FockBasis b0(ModelParams::single_mode(0.4, 0.0), 20);
  const Eigen::MatrixXd h0 = b0.hamiltonian();
  CHECK(h0.isDiagonal());
  CHECK(h0(0, 0) == doctest::Approx(0.4));
  CHECK(h0(21, 21) == doctest::Approx(0.0));
  const FockBasis b(ModelParams::single_mode(0.4, 0.1), 20);
  const Eigen::MatrixXd h = b.hamiltonian();
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
  // <e,0| H |g,1> = w dl / sqrt(2w)
  CHECK(h(0, 22) == doctest::Approx(0.4 * 0.1 / std::sqrt(0.8)));
  CHECK_THROWS_AS(FockBasis(ModelParams::single_mode(0.4, 0.1), 5), ConfigError);
}

TEST_CASE("weak coupling follows Jaynes-Cummings") {
  const double dl = 0.01, g = dl * std::sqrt(0.2);
  const ModelParams p = ModelParams::single_mode(0.4, dl);
  PropagatorConfig cfg;
  cfg.dt = 0.5;
  cfg.n_steps = 1400;
  cfg.save_stride = 100;
  const Trajectory tr = fock_oracle_propagate(build_initial_state(InitialState::factorized_excited, p, kGrid), p, cfg, 20);
  for (const auto& f : tr.frames) {
    const double pe = f.values.row(0).squaredNorm() * kGrid.cell_volume();
    CHECK(std::abs(pe - oracle::jc_excited(g, f.time)) < 0.01);
  }
}

TEST_CASE("grid propagation matches the Fock oracle") {
  for (double dl : {0.01, 0.1, 0.4}) {
    const ModelParams p = ModelParams::single_mode(0.4, dl);
    PropagatorConfig cfg;
    cfg.n_steps = 20000;
    cfg.save_stride = 5000;
    const SpinorField psi0 = build_initial_state(InitialState::factorized_excited, p, kGrid);
    const Trajectory a = propagate(psi0, p, cfg);
    const Trajectory b = fock_oracle_propagate(psi0, p, cfg, 40);
    REQUIRE(a.frames.size() == b.frames.size());
    for (std::size_t i = 0; i < a.frames.size(); ++i) {
      CHECK(b.frames[i].time == doctest::Approx(a.frames[i].time));
      CHECK(1.0 - overlap_abs2(a.frames[i], b.frames[i]) < 1e-8);
    }
  }
}

TEST_CASE("two-mode Fock oracle") {
  ModelParams p;
  p.mode_freqs = {0.4, 0.45};
  p.couplings = {0.05, 0.05};
  const QGrid g = QGrid::symmetric({10.0, 10.0}, {81, 81});
  PropagatorConfig cfg;
  cfg.n_steps = 4000;
  cfg.save_stride = 2000;
  const SpinorField psi0 = build_initial_state(InitialState::factorized_excited, p, g);
  const Trajectory a = propagate(psi0, p, cfg);
  const Trajectory b = fock_oracle_propagate(psi0, p, cfg, 12);
  CHECK(1.0 - overlap_abs2(a.frames.back(), b.frames.back()) < 1e-8);
}

TEST_CASE("cutoff guard") {
  const ModelParams p = ModelParams::single_mode(0.4, 0.4);
  PropagatorConfig cfg;
  cfg.n_steps = 40000;
  cfg.save_stride = 1000;
  CHECK_THROWS_AS(fock_oracle_propagate(build_initial_state(InitialState::qbo_excited, p, kGrid), p, cfg, 10),
                  CutoffError);
}

TEST_CASE("projection round trip and photon numbers") {
  const ModelParams p = ModelParams::single_mode(0.4, 0.1);
  const FockBasis b(p, 40);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(Eigen::Index(b.dim()));
  c[0] = std::sqrt(0.5);
  c[41 + 3] = std::complex<double>(0.0, std::sqrt(0.5));
  const SpinorField psi = b.to_grid(c, kGrid, 0.0);
  CHECK((b.project(psi) - c).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(b.photon_numbers(c)[0] == doctest::Approx(1.5));
}
