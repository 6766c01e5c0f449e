#ifndef QINFO_STOCHASTIC_HPP
#define QINFO_STOCHASTIC_HPP

// Wiener paths, Markov chains over information words, and entropy
// trajectories of chain-driven mixed states.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qinfo/entropy.hpp"
#include "qinfo/errors.hpp"
#include "qinfo/infocore.hpp"
#include "qinfo/random_source.hpp"

namespace qinfo {

struct WienerPath {
  std::vector<double> times;
  std::vector<double> values;
};

inline void validate_time_grid(std::span<const double> grid) {
  detail::require<ValidationError>(grid.size() >= 1, "time grid is empty");
  detail::require<ValidationError>(grid.front() == 0.0, "time grid must start at 0");
  for (std::size_t j = 1; j < grid.size(); ++j)
    detail::require<ValidationError>(grid[j] > grid[j - 1], "time grid must be strictly increasing");
}

/// Independent N(0, dt) increments on the grid, W(0) = 0.
inline WienerPath simulate_wiener(std::span<const double> t_grid, RandomSource& source) {
  validate_time_grid(t_grid);
  WienerPath path{{t_grid.begin(), t_grid.end()}, {}};
  path.values.resize(t_grid.size());
  path.values[0] = 0.0;
  for (std::size_t j = 1; j < t_grid.size(); ++j)
    path.values[j] = path.values[j - 1] + std::sqrt(t_grid[j] - t_grid[j - 1]) * source.gaussian();
  return path;
}

class MarkovChain {
 public:
  MarkovChain(std::vector<int> states, Eigen::MatrixXd transition)
      : states_(std::move(states)), p_(std::move(transition)) {
    const auto n = static_cast<Eigen::Index>(states_.size());
    detail::require<ShapeError>(n > 0, "Markov chain has no states");
    detail::require<ShapeError>(p_.rows() == n && p_.cols() == n,
                                "transition matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    detail::require<ValidationError>(p_.allFinite() && (p_.array() >= 0.0).all() && (p_.array() <= 1.0).all(),
                                     "transition probabilities must lie in [0, 1]");
    for (Eigen::Index i = 0; i < n; ++i)
      detail::require<ValidationError>(std::abs(p_.row(i).sum() - 1.0) <= kNormTolerance,
                                       "transition row " + std::to_string(i) + " does not sum to 1");
    for (int s : states_) detail::require<ValidationError>(s >= 0, "word indices must be non-negative");
    std::vector<int> sorted = states_;
    std::sort(sorted.begin(), sorted.end());
    detail::require<ValidationError>(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                                     "duplicate word index in Markov chain");
  }

  const std::vector<int>& states() const { return states_; }
  const Eigen::MatrixXd& transition() const { return p_; }
  std::size_t size() const { return states_.size(); }

  std::size_t position_of(int word) const {
    auto it = std::find(states_.begin(), states_.end(), word);
    detail::require<ValidationError>(it != states_.end(), "word " + std::to_string(word) + " is not a chain state");
    return static_cast<std::size_t>(it - states_.begin());
  }

 private:
  std::vector<int> states_;
  Eigen::MatrixXd p_;
};

inline constexpr double kStationaryTolerance = 1e-12;
inline constexpr long kStationaryMaxIterations = 1'000'000;

/// Power iteration pi <- pi P from the first state until successive
/// iterates differ by at most 1e-12 (sup norm). Periodic chains never
/// settle and raise ConvergenceError.
inline Eigen::RowVectorXd stationary_vector(const MarkovChain& chain) {
  const auto& p = chain.transition();
  const Eigen::Index n = p.rows();
  Eigen::RowVectorXd pi = Eigen::RowVectorXd::Zero(n);
  pi(0) = 1.0;
  for (long it = 0; it < kStationaryMaxIterations; ++it) {
    Eigen::RowVectorXd next = pi * p;
    next /= next.sum();
    const double delta = (next - pi).cwiseAbs().maxCoeff();
    pi = std::move(next);
    if (delta <= kStationaryTolerance) {
      const double residual = (pi * p - pi).cwiseAbs().maxCoeff();
      if (residual > 1e-10) break;
      return pi;
    }
  }
  throw ConvergenceError("power iteration did not reach a stationary distribution (reducible or periodic chain?)");
}

/// Keyed by word index.
inline ProbabilityWeights stationary_distribution(const MarkovChain& chain) {
  Eigen::RowVectorXd pi = stationary_vector(chain);
  std::map<int, double> w;
  for (std::size_t i = 0; i < chain.size(); ++i)
    w[chain.states()[i]] = std::clamp(pi(static_cast<Eigen::Index>(i)), 0.0, 1.0);
  return ProbabilityWeights(std::move(w));
}

namespace detail {

inline std::size_t next_position(const Eigen::MatrixXd& p, std::size_t from, double u) {
  const auto row = static_cast<Eigen::Index>(from);
  double acc = 0.0;
  Eigen::Index last = 0;
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    if (p(row, j) <= 0.0) continue;
    acc += p(row, j);
    last = j;
    if (u < acc) return static_cast<std::size_t>(j);
  }
  return static_cast<std::size_t>(last);  // u landed in the rounding gap below 1
}

inline std::vector<std::size_t> sample_positions(const MarkovChain& chain, std::size_t steps, RandomSource& source,
                                                 std::size_t start) {
  std::vector<std::size_t> seq;
  seq.reserve(steps);
  seq.push_back(start);
  while (seq.size() < steps) seq.push_back(next_position(chain.transition(), seq.back(), source.uniform()));
  return seq;
}

}  // namespace detail

/// Word sequence of length `steps` starting at `start_word` (default: the
/// chain's first state). Each transition consumes one uniform draw.
inline std::vector<int> sample_word_sequence(const MarkovChain& chain, std::size_t steps, RandomSource& source,
                                             std::optional<int> start_word = std::nullopt) {
  detail::require<ValidationError>(steps >= 1, "need at least one step");
  const std::size_t start = start_word ? chain.position_of(*start_word) : 0;
  auto pos = detail::sample_positions(chain, steps, source, start);
  std::vector<int> words(pos.size());
  std::transform(pos.begin(), pos.end(), words.begin(), [&](std::size_t i) { return chain.states()[i]; });
  return words;
}

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<std::size_t> counts;
};

struct EntropyTrajectory {
  std::vector<double> times;
  std::vector<double> entropy;  // nats
  double mean = 0.0;
  Histogram histogram;
};

/// Chain advances one step per grid point starting from its first state.
/// At grid index j the density matrix mixes the chain's pure states with
/// their occupation frequencies over the last min(window, j + 1) steps.
/// The histogram spans [0, ln d] with `bins` equal bins.
inline EntropyTrajectory entropy_trajectory(const MarkovChain& chain, std::span<const PureState> states,
                                            std::span<const double> t_grid, RandomSource& source, std::size_t window,
                                            std::size_t bins = 20) {
  detail::require<ShapeError>(states.size() == chain.size(), "need exactly one pure state per chain state");
  detail::require<ValidationError>(window >= 1, "window must be at least 1");
  detail::require<ValidationError>(bins >= 1, "histogram needs at least one bin");
  validate_time_grid(t_grid);
  const Eigen::Index d = states.front().dim();
  for (const auto& s : states) detail::require<ShapeError>(s.dim() == d, "chain states differ in dimension");

  const auto path = detail::sample_positions(chain, t_grid.size(), source, 0);
  std::vector<std::size_t> counts(chain.size(), 0);

  EntropyTrajectory out;
  out.times.assign(t_grid.begin(), t_grid.end());
  out.entropy.reserve(t_grid.size());
  for (std::size_t j = 0; j < path.size(); ++j) {
    ++counts[path[j]];
    if (j >= window) --counts[path[j - window]];
    const double filled = static_cast<double>(std::min(window, j + 1));
    std::map<int, double> f;
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (counts[i] > 0) f[static_cast<int>(i)] = static_cast<double>(counts[i]) / filled;
    // Frequencies are exact ratios; renormalize away the last-ulp drift.
    double total = 0.0;
    for (auto& [i, p] : f) total += p;
    for (auto& [i, p] : f) p /= total;
    const double s = von_neumann_entropy(density_from_mixture(states, ProbabilityWeights(std::move(f))));
    out.entropy.push_back(std::clamp(s, 0.0, std::log(static_cast<double>(d))));
  }

  out.mean = std::accumulate(out.entropy.begin(), out.entropy.end(), 0.0) / static_cast<double>(out.entropy.size());
  const double top = std::log(static_cast<double>(d));
  out.histogram.counts.assign(bins, 0);
  for (std::size_t b = 0; b <= bins; ++b)
    out.histogram.edges.push_back(top * static_cast<double>(b) / static_cast<double>(bins));
  for (double s : out.entropy) {
    std::size_t b = top > 0.0 ? static_cast<std::size_t>(s / top * static_cast<double>(bins)) : 0;
    ++out.histogram.counts[std::min(b, bins - 1)];
  }
  return out;
}

}  // namespace qinfo

#endif  // QINFO_STOCHASTIC_HPP
