#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qinfo/dynamics.hpp"

using namespace qinfo;

namespace {
const PhysicalConstants kNat = PhysicalConstants::natural();

HamiltonianModel model(Eigen::Index d, double zeta, double lambda, double omega = 1.0) {
  return build_hamiltonian(FockSpace(d, omega), zeta, lambda, kNat);
}
}  // namespace

TEST(Ladder, SmallDimensions) {
  auto l2 = build_ladder(2);
  Eigen::Matrix2d expect;
  expect << 0, 1, 0, 0;
  EXPECT_EQ(l2.lower, Eigen::MatrixXd(expect));
  EXPECT_EQ(l2.raise, l2.lower.transpose());

  auto l3 = build_ladder(3);
  EXPECT_DOUBLE_EQ(l3.lower(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(l3.lower(1, 2), std::sqrt(2.0));
  EXPECT_EQ(l3.lower.cwiseAbs().sum(), 1.0 + std::sqrt(2.0));
  EXPECT_THROW(build_ladder(1), DomainError);
}

TEST(Ladder, TruncatedCommutator) {
  auto l = build_ladder(16);
  // Plain triple loop, not Eigen's product.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      for (int k = 0; k < 16; ++k) c(i, j) += l.lower(i, k) * l.raise(k, j) - l.raise(i, k) * l.lower(k, j);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      double want = i != j ? 0.0 : (i == 15 ? -15.0 : 1.0);
      EXPECT_NEAR(c(i, j), want, 1e-12) << i << "," << j;
    }
}

TEST(Ladder, NumberOperatorIsRaiseTimesLower) {
  auto l = build_ladder(10);
  EXPECT_LE((number_operator(10) - l.raise * l.lower).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Hamiltonian, BareNumberOperator) {
  auto h = model(8, 0.0, 0.0, 2.0).matrix();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) EXPECT_EQ(h(i, j), i == j ? 2.0 * i : 0.0);
}

TEST(Hamiltonian, ConstantShift) {
  const double z0 = zeta(0);
  auto h = model(6, z0, 0.0).matrix();
  for (int m = 0; m < 6; ++m) EXPECT_NEAR(h(m, m), m + z0, 1e-15);
}

TEST(Hamiltonian, OffDiagonalCoupling) {
  auto h = model(4, 0.5, 0.3).matrix();
  for (int m = 0; m < 3; ++m) {
    EXPECT_NEAR(h(m, m + 1), 0.075 * std::sqrt(m + 1.0), 1e-15);
    EXPECT_EQ(h(m + 1, m), h(m, m + 1));
  }
  EXPECT_EQ(h(0, 2), 0.0);
  EXPECT_EQ(h, h.transpose());
}

TEST(Hamiltonian, RejectsNegativeZeta) {
  EXPECT_THROW(model(4, -0.1, 0.1), DomainError);
  EXPECT_THROW(FockSpace(1, 1.0), DomainError);
  EXPECT_THROW(FockSpace(4, 0.0), DomainError);
}

TEST(Spectrum, UncoupledIsExact) {
  auto levels = eigen_spectrum(model(12, 0.7, 0.0, 1.5));
  ASSERT_EQ(levels.size(), 12u);
  for (int m = 0; m < 12; ++m) EXPECT_NEAR(levels[m], 1.5 * (m + 0.7), 1e-12);
}

TEST(Spectrum, DisplacedGroundState) {
  auto levels = eigen_spectrum(model(64, 1.0, 0.4));
  EXPECT_NEAR(levels.front(), 0.96, 1e-8);
  EXPECT_NEAR(levels.front(), ground_energy_analytic(1.0, 1.0, 0.4, kNat), 1e-8);
  for (std::size_t i = 1; i < levels.size(); ++i) EXPECT_GT(levels[i], levels[i - 1]);
}

TEST(Spectrum, EquallySpacedLowLevels) {
  // lambda zeta / 2 = 0.2
  auto levels = eigen_spectrum(model(64, 1.0, 0.4));
  for (int m = 0; m < 16; ++m) EXPECT_NEAR(levels[m + 1] - levels[m], 1.0, 1e-6) << m;
  for (int m = 0; m <= 16; ++m) EXPECT_NEAR(levels[m], m + 1.0 - 0.04, 1e-6) << m;
}

TEST(Spectrum, TruncationConvergence) {
  for (double g : {0.1, 0.25, 0.5}) {
    const double zeta = 1.0, lambda = 2.0 * g / zeta;
    const double e32 = eigen_spectrum(model(32, zeta, lambda)).front();
    const double e64 = eigen_spectrum(model(64, zeta, lambda)).front();
    EXPECT_LT(std::abs(e32 - e64), 1e-10) << g;
    const double exact = ground_energy_analytic(1.0, zeta, lambda, kNat);
    EXPECT_NEAR(e64, exact, 1e-8 * std::abs(exact)) << g;
  }
}

TEST(Spectrum, TwoLevelOracle) {
  // At D = 2 the matrix is [[z, c], [c, 1 + z]].
  const double z = 0.3, lambda = 0.8;
  const double c = 0.5 * lambda * z;
  auto [lo, hi] = oracle::eig2x2(z, c, 1.0 + z);
  auto levels = eigen_spectrum(model(2, z, lambda));
  EXPECT_NEAR(levels[0], lo, 1e-14);
  EXPECT_NEAR(levels[1], hi, 1e-14);
}

TEST(Spectrum, ReconstructionHolds) {
  auto m = model(40, 2.0, 0.3, 0.7);
  auto sys = diagonalize(m);
  Eigen::MatrixXd rec = sys.vectors * sys.values.asDiagonal() * sys.vectors.transpose();
  EXPECT_LE((rec - m.matrix()).cwiseAbs().maxCoeff(), 1e-9 * m.matrix().cwiseAbs().maxCoeff());
}

TEST(GroundEnergyAnalytic, Examples) {
  EXPECT_DOUBLE_EQ(ground_energy_analytic(2.0, 0.5, 0.0, kNat), 1.0);
  EXPECT_DOUBLE_EQ(ground_energy_analytic(2.0, 0.0, 0.9, kNat), 0.0);
  EXPECT_DOUBLE_EQ(ground_energy_analytic(1.0, 1.0, 1.0, kNat), 0.75);
}

TEST(Expectation, Examples) {
  auto n = number_operator(6);
  EXPECT_DOUBLE_EQ(expectation(PureState::basis(6, 0), n), 0.0);
  EXPECT_DOUBLE_EQ(expectation(PureState::basis(6, 3), n), 3.0);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(6);
  v(0) = v(2) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(expectation(PureState(v), n), 1.0, 1e-15);
}

TEST(Expectation, Errors) {
  Eigen::MatrixXcd skew = Eigen::MatrixXcd::Zero(3, 3);
  skew(0, 1) = 1.0;
  EXPECT_THROW(expectation(PureState::basis(3, 0), skew), ValidationError);
  EXPECT_THROW(expectation(PureState::basis(3, 0), number_operator(4)), ShapeError);
}

TEST(Evolve, ZeroTimeIsIdentity) {
  std::mt19937_64 rng(3);
  PureState psi(oracle::random_state(8, rng));
  auto r = evolve(psi, model(8, 0.4, 0.2), 0.0, 3);
  ASSERT_EQ(r.states.size(), 4u);
  for (const auto& s : r.states) EXPECT_LE((s.amplitudes() - psi.amplitudes()).norm(), 1e-13);
}

TEST(Evolve, FockStateIsStationaryWithoutCoupling) {
  auto r = evolve(PureState::basis(10, 4), model(10, 0.3, 0.0), 25.0, 50);
  for (double n : r.number) EXPECT_NEAR(n, 4.0, 1e-12);
}

TEST(Evolve, TwoLevelRelativePhase) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(6);
  v(0) = v(1) = 1.0 / std::sqrt(2.0);
  auto r = evolve(PureState(v), model(6, 0.0, 0.0), 10.0, 40);
  for (std::size_t j = 0; j < r.times.size(); ++j) {
    EXPECT_NEAR(r.number[j], 0.5, 1e-12);
    const auto& a = r.states[j].amplitudes();
    const cplx rel = a(1) / a(0);
    EXPECT_NEAR(std::abs(rel - std::polar(1.0, -r.times[j])), 0.0, 1e-10) << r.times[j];
  }
}

TEST(Evolve, NormAndEnergyConserved) {
  std::mt19937_64 rng(11);
  auto m = model(32, 1.0, 0.4);
  for (int trial = 0; trial < 5; ++trial) {
    PureState psi(oracle::random_state(32, rng));
    auto r = evolve(psi, m, 100.0, 200);
    const double e0 = r.energy.front();
    for (std::size_t j = 0; j < r.states.size(); ++j) {
      EXPECT_NEAR(r.states[j].amplitudes().norm(), 1.0, 1e-10);
      EXPECT_NEAR(r.energy[j], e0, 1e-9 * std::abs(e0));
    }
  }
}

TEST(Evolve, Preconditions) {
  auto m = model(4, 0.5, 0.1);
  EXPECT_THROW(evolve(PureState::basis(5, 0), m, 1.0, 1), ShapeError);
  EXPECT_THROW(evolve(PureState::basis(4, 0), m, -1.0, 1), DomainError);
  EXPECT_THROW(evolve(PureState::basis(4, 0), m, 1.0, 0), DomainError);
}
