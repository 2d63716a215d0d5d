#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "photonef/errors.hpp"
#include "photonef/model.hpp"

using namespace photonef;

TEST_CASE("grid invariants") {
  const QGrid g = QGrid::symmetric(20.0, 513);
  CHECK(g.size() == 513);
  CHECK(g.axis(0).spacing() == doctest::Approx(40.0 / 512));
  REQUIRE(g.zero_index(0));
  CHECK(g.axis(0).coord(*g.zero_index(0)) == 0.0);
  CHECK_THROWS_AS(QGrid::symmetric(20.0, 8), ConfigError);
  CHECK_THROWS_AS(QGrid({Axis{-1.0, 2.0, 64}}), ConfigError);
  CHECK_THROWS_AS(QGrid(std::vector<Axis>{}), ConfigError);

  const QGrid g2 = QGrid::symmetric({5.0, 6.0}, {17, 33});
  CHECK(g2.size() == 17 * 33);
  const std::size_t k = g2.flat(3, 7);
  CHECK(g2.index(k, 0) == 3);
  CHECK(g2.index(k, 1) == 7);
  CHECK(g2.coordinates(1)[Eigen::Index(k)] == doctest::Approx(g2.axis(1).coord(7)));
}

TEST_CASE("qBO surfaces against a general 2x2 eigensolver") {
  for (double dl : {0.01, 0.1, 0.4}) {
    const ModelParams p = ModelParams::single_mode(0.4, dl);
    const QGrid g = QGrid::symmetric(20.0, 513);
    const QboSurfaces s = qbo_surfaces(p, g);
    const Eigen::ArrayXd q = g.coordinates(0);
    for (Eigen::Index k = 0; k < q.size(); ++k) {
      const auto e = oracle::eig2(0.5 * 0.16 * q[k] * q[k], 0.2, 0.4 * dl * q[k]);
      CHECK(s.lower[k] == doctest::Approx(e.lower).epsilon(1e-12));
      CHECK(s.upper[k] == doctest::Approx(e.upper).epsilon(1e-12));
      // same eigenvector up to sign
      CHECK(std::abs(std::abs(s.vec_upper.col(k).dot(e.vup)) - 1.0) < 1e-12);
      CHECK(std::abs(std::abs(s.vec_lower.col(k).dot(e.vlow)) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("surface examples") {
  const QGrid g = QGrid::symmetric(20.0, 513);
  const std::size_t z = *g.zero_index(0);
  SUBCASE("q = 0 gives -w0/2 and +w0/2") {
    const QboSurfaces s = qbo_surfaces(ModelParams::single_mode(0.4, 0.1), g);
    CHECK(s.lower[Eigen::Index(z)] == doctest::Approx(-0.2));
    CHECK(s.upper[Eigen::Index(z)] == doctest::Approx(0.2));
    CHECK(s.vec_upper(0, Eigen::Index(z)) == 1.0);
    CHECK(s.vec_upper(1, Eigen::Index(z)) == 0.0);
  }
  SUBCASE("zero coupling gives shifted parabolas") {
    const QboSurfaces s = qbo_surfaces(ModelParams::single_mode(0.4, 0.0), g);
    const Eigen::ArrayXd q = g.coordinates(0);
    CHECK((s.upper - (0.08 * q.square() + 0.2)).abs().maxCoeff() < 1e-14);
    CHECK((s.lower - (0.08 * q.square() - 0.2)).abs().maxCoeff() < 1e-14);
  }
  SUBCASE("ordering and gap") {
    const QboSurfaces s = qbo_surfaces(ModelParams::single_mode(0.4, 0.4), g);
    CHECK(((s.upper - s.lower) >= 0.4 - 1e-15).all());
  }
}

TEST_CASE("eigenvector sign convention") {
  const QGrid g = QGrid::symmetric(20.0, 513);
  const QboSurfaces s = qbo_surfaces(ModelParams::single_mode(0.4, 0.4), g);
  CHECK(s.vec_upper(0, 0) > 0.0);
  CHECK(s.vec_lower(0, 0) != 0.0);
  for (Eigen::Index k = 1; k < s.upper.size(); ++k) {
    CHECK(s.vec_upper.col(k).dot(s.vec_upper.col(k - 1)) > 0.0);
    CHECK(s.vec_lower.col(k).dot(s.vec_lower.col(k - 1)) > 0.0);
  }
}

TEST_CASE("initial states") {
  const QGrid g = QGrid::symmetric(20.0, 513);
  const ModelParams p = ModelParams::single_mode(0.4, 0.1);
  for (auto kind : {InitialState::qbo_excited, InitialState::factorized_excited}) {
    const SpinorField psi = build_initial_state(kind, p, g);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(psi.time == 0.0);
  }
  const SpinorField f = build_initial_state(InitialState::factorized_excited, p, g);
  CHECK(f.values.row(1).norm() == 0.0);
  const SpinorField q = build_initial_state(InitialState::qbo_excited, p, g);
  const QboSurfaces s = qbo_surfaces(p, g);
  for (Eigen::Index k = 0; k < q.values.cols(); ++k) {
    const double n = q.values.col(k).norm();
    if (n < 1e-200) continue;
    CHECK(std::abs(std::abs(q.values.col(k).dot(s.vec_upper.col(k).cast<std::complex<double>>())) / n - 1.0) < 1e-13);
  }
  CHECK(parse_initial_state("qbo_excited") == InitialState::qbo_excited);
  CHECK_THROWS_AS(parse_initial_state("ground"), ConfigError);
}

TEST_CASE("parameter validation") {
  ModelParams p = ModelParams::single_mode(0.4, 0.1);
  const QGrid g2 = QGrid::symmetric({5.0, 5.0}, {17, 17});
  CHECK_THROWS_AS(qbo_surfaces(p, g2), ConfigError);
  p.omega0 = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ModelParams::single_mode(0.4, 0.1);
  p.couplings = {0.1, 0.2};
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
