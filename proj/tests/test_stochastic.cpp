#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "qinfo/stochastic.hpp"

using namespace qinfo;

namespace {

std::vector<double> uniform_grid(double t_end, std::size_t n) {
  std::vector<double> g(n + 1);
  for (std::size_t j = 0; j <= n; ++j) g[j] = t_end * static_cast<double>(j) / static_cast<double>(n);
  return g;
}

MarkovChain symmetric_chain() {
  Eigen::MatrixXd p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  return MarkovChain({0, 1}, p);
}

}  // namespace

TEST(RandomSource, Reproducible) {
  RandomSource a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double x = a.gaussian();
    EXPECT_EQ(x, b.gaussian());
    (void)c;
  }
  EXPECT_NE(RandomSource(42).next_u64(), RandomSource(43).next_u64());
  EXPECT_EQ(RandomSource(9).derive(3).next_u64(), RandomSource(9).derive(3).next_u64());
  EXPECT_NE(RandomSource(9).derive(3).next_u64(), RandomSource(9).derive(4).next_u64());
}

TEST(RandomSource, UniformRange) {
  RandomSource s(1);
  double lo = 1, hi = 0;
  for (int i = 0; i < 100000; ++i) {
    double u = s.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
}

TEST(RandomSource, RunTrialsMatchesSerial) {
  RandomSource base(77);
  auto par = run_trials(64, base, [](std::size_t, RandomSource& s) { return s.gaussian(); });
  for (std::size_t i = 0; i < 64; ++i) {
    RandomSource s = base.derive(i);
    EXPECT_EQ(par[i], s.gaussian());
  }
}

TEST(Wiener, StartsAtZero) {
  RandomSource s(5);
  auto grid = uniform_grid(2.0, 10);
  auto w = simulate_wiener(grid, s);
  EXPECT_EQ(w.values.front(), 0.0);
  EXPECT_EQ(w.values.size(), grid.size());
  EXPECT_EQ(w.times, grid);
}

TEST(Wiener, RejectsBadGrid) {
  RandomSource s(5);
  std::vector<double> bad{0.0, 0.5, 0.5, 1.0};
  EXPECT_THROW(simulate_wiener(bad, s), ValidationError);
  std::vector<double> late{0.1, 0.5};
  EXPECT_THROW(simulate_wiener(late, s), ValidationError);
}

TEST(Wiener, EndpointStatistics) {
  const std::size_t n = 100000;
  auto grid = uniform_grid(1.0, 4);
  auto ends = run_trials(n, RandomSource(2024), [&](std::size_t, RandomSource& s) {
    auto w = simulate_wiener(grid, s);
    return std::array<double, 3>{w.values.back(), w.values[2] - w.values[0], w.values[4] - w.values[2]};
  });
  double mean = 0, sq = 0, c = 0, va = 0, vb = 0;
  for (auto& e : ends) mean += e[0];
  mean /= n;
  for (auto& e : ends) {
    sq += (e[0] - mean) * (e[0] - mean);
    c += e[1] * e[2];
    va += e[1] * e[1];
    vb += e[2] * e[2];
  }
  const double var = sq / (n - 1);
  EXPECT_LE(std::abs(mean), 4.0 / std::sqrt(double(n)));
  EXPECT_GE(var, 0.98);
  EXPECT_LE(var, 1.02);
  EXPECT_LE(std::abs(c / std::sqrt(va * vb)), 0.02);
}

TEST(Wiener, VarianceGrowsLinearly) {
  std::vector<double> grid{0.0, 0.25, 0.5, 1.0, 2.0};
  const std::size_t n = 40000;
  auto paths = run_trials(n, RandomSource(8), [&](std::size_t, RandomSource& s) { return simulate_wiener(grid, s).values; });
  // Least-squares slope through the origin of Var[W(t)] against t.
  double num = 0, den = 0;
  for (std::size_t j = 1; j < grid.size(); ++j) {
    double v = 0;
    for (auto& p : paths) v += p[j] * p[j];
    v /= n;
    num += grid[j] * v;
    den += grid[j] * grid[j];
  }
  EXPECT_NEAR(num / den, 1.0, 0.05);
}

TEST(Wiener, Reproducible) {
  auto grid = uniform_grid(1.0, 50);
  RandomSource a(3), b(3);
  EXPECT_EQ(simulate_wiener(grid, a).values, simulate_wiener(grid, b).values);
}

TEST(Markov, Validation) {
  Eigen::MatrixXd bad(2, 2);
  bad << 0.6, 0.6, 0.5, 0.5;
  EXPECT_THROW(MarkovChain({0, 1}, bad), ValidationError);
  Eigen::MatrixXd neg(2, 2);
  neg << 1.2, -0.2, 0.5, 0.5;
  EXPECT_THROW(MarkovChain({0, 1}, neg), ValidationError);
  EXPECT_THROW(MarkovChain({0, 1, 2}, Eigen::MatrixXd::Identity(2, 2)), ShapeError);
  EXPECT_THROW(MarkovChain({1, 1}, Eigen::MatrixXd::Identity(2, 2)), ValidationError);
}

TEST(Markov, StationarySymmetric) {
  auto pi = stationary_distribution(symmetric_chain());
  EXPECT_NEAR(pi.at(0), 0.5, 1e-12);
  EXPECT_NEAR(pi.at(1), 0.5, 1e-12);
}

TEST(Markov, StationaryByHand) {
  Eigen::MatrixXd p(2, 2);
  p << 0.9, 0.1, 0.5, 0.5;
  auto pi = stationary_distribution(MarkovChain({4, 7}, p));
  EXPECT_NEAR(pi.at(4), 5.0 / 6.0, 1e-11);
  EXPECT_NEAR(pi.at(7), 1.0 / 6.0, 1e-11);
}

TEST(Markov, FixedPointAndDirectSolve) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd p = oracle::random_stochastic(4, rng);
    MarkovChain chain({0, 1, 2, 3}, p);
    Eigen::RowVectorXd pi = stationary_vector(chain);
    EXPECT_LE((pi * p - pi).cwiseAbs().maxCoeff(), 1e-10);
    Eigen::VectorXd direct = oracle::stationary_direct(p);
    EXPECT_LE((pi.transpose() - direct).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Markov, PeriodicChainDoesNotConverge) {
  Eigen::MatrixXd p(2, 2);
  p << 0, 1, 1, 0;
  EXPECT_THROW(stationary_distribution(MarkovChain({0, 1}, p)), ConvergenceError);
}

TEST(Sampling, AbsorbingIdentity) {
  MarkovChain chain({1, 3, 5}, Eigen::MatrixXd::Identity(3, 3));
  RandomSource s(1);
  auto seq = sample_word_sequence(chain, 200, s, 3);
  ASSERT_EQ(seq.size(), 200u);
  for (int w : seq) EXPECT_EQ(w, 3);
}

TEST(Sampling, SymmetricFrequency) {
  RandomSource s(12);
  auto seq = sample_word_sequence(symmetric_chain(), 100000, s);
  const double f0 = std::count(seq.begin(), seq.end(), 0) / 1e5;
  EXPECT_GE(f0, 0.49);
  EXPECT_LE(f0, 0.51);
}

TEST(Sampling, MatchesStationary) {
  Eigen::MatrixXd p(3, 3);
  p << 0.2, 0.5, 0.3, 0.6, 0.1, 0.3, 0.3, 0.3, 0.4;
  MarkovChain chain({0, 1, 2}, p);
  RandomSource s(4);
  auto seq = sample_word_sequence(chain, 200000, s);
  auto pi = stationary_distribution(chain);
  for (int w = 0; w < 3; ++w) EXPECT_NEAR(std::count(seq.begin(), seq.end(), w) / 2e5, pi.at(w), 0.01);
}

TEST(Sampling, Deterministic) {
  Eigen::MatrixXd p(3, 3);
  p << 0.2, 0.5, 0.3, 0.6, 0.1, 0.3, 0.3, 0.3, 0.4;
  MarkovChain chain({0, 1, 2}, p);
  RandomSource a(17), b(17);
  EXPECT_EQ(sample_word_sequence(chain, 1000, a), sample_word_sequence(chain, 1000, b));
  EXPECT_THROW(sample_word_sequence(chain, 1000, a, 9), ValidationError);
  EXPECT_THROW(sample_word_sequence(chain, 0, a), ValidationError);
}

TEST(EntropyTrajectory, SingleStateIsPure) {
  MarkovChain chain({0}, Eigen::MatrixXd::Ones(1, 1));
  std::vector<PureState> states{PureState::basis(3, 1)};
  RandomSource s(1);
  auto tr = entropy_trajectory(chain, states, uniform_grid(1.0, 100), s, 10);
  for (double v : tr.entropy) EXPECT_NEAR(v, 0.0, 1e-12);
  EXPECT_EQ(tr.histogram.counts.front(), 101u);
}

TEST(EntropyTrajectory, OrthogonalStatesApproachLn2) {
  std::vector<PureState> states{PureState::basis(2, 0), PureState::basis(2, 1)};
  RandomSource s(21);
  auto tr = entropy_trajectory(symmetric_chain(), states, uniform_grid(1.0, 20000), s, 10000);
  for (std::size_t j = 10000; j < tr.entropy.size(); ++j) EXPECT_NEAR(tr.entropy[j], std::log(2.0), 0.01);
}

TEST(EntropyTrajectory, IdenticalStatesArePure) {
  Eigen::VectorXcd v(2);
  v << 0.6, cplx(0, 0.8);
  std::vector<PureState> states{PureState(v), PureState(v)};
  RandomSource s(2);
  auto tr = entropy_trajectory(symmetric_chain(), states, uniform_grid(1.0, 500), s, 50);
  for (double e : tr.entropy) EXPECT_NEAR(e, 0.0, 1e-9);
}

TEST(EntropyTrajectory, BoundsAndStatistics) {
  std::mt19937_64 rng(5);
  const int d = 3;
  std::vector<PureState> states;
  for (int i = 0; i < 4; ++i) states.emplace_back(oracle::random_state(d, rng));
  MarkovChain chain({0, 1, 2, 3}, oracle::random_stochastic(4, rng));
  RandomSource s(6);
  auto tr = entropy_trajectory(chain, states, uniform_grid(10.0, 2000), s, 40, 15);
  double sum = 0;
  for (double e : tr.entropy) {
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, std::log(double(d)));
    sum += e;
  }
  EXPECT_NEAR(tr.mean, sum / tr.entropy.size(), 1e-14);
  EXPECT_EQ(tr.histogram.edges.size(), 16u);
  EXPECT_EQ(std::accumulate(tr.histogram.counts.begin(), tr.histogram.counts.end(), std::size_t{0}), tr.entropy.size());
  EXPECT_DOUBLE_EQ(tr.histogram.edges.back(), std::log(double(d)));
}

TEST(EntropyTrajectory, Errors) {
  std::vector<PureState> states{PureState::basis(2, 0)};
  RandomSource s(1);
  EXPECT_THROW(entropy_trajectory(symmetric_chain(), states, uniform_grid(1, 5), s, 2), ShapeError);
  std::vector<PureState> mixed{PureState::basis(2, 0), PureState::basis(3, 0)};
  EXPECT_THROW(entropy_trajectory(symmetric_chain(), mixed, uniform_grid(1, 5), s, 2), ShapeError);
  std::vector<PureState> ok{PureState::basis(2, 0), PureState::basis(2, 1)};
  EXPECT_THROW(entropy_trajectory(symmetric_chain(), ok, uniform_grid(1, 5), s, 0), ValidationError);
}
