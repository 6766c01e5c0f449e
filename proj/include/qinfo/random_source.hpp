#ifndef QINFO_RANDOM_SOURCE_HPP
#define QINFO_RANDOM_SOURCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <thread>
#include <type_traits>
#include <vector>

namespace qinfo {

/// Seeded random stream: std::mt19937_64 for bits, 53-bit uniforms, and
/// Box-Muller (cosine branch first, sine branch cached) for Gaussians.
/// None of the implementation-defined std distributions are used, so a
/// seed fixes the stream on every standard library.
///
/// A source is single-owner. Parallel work takes one derive()d source
/// per task.
class RandomSource {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64/box-muller";

  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal.
  double gaussian() {
    if (spare_) {
      double g = *spare_;
      spare_.reset();
      return g;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

  /// Child stream for task `index`: seed = splitmix64(seed + (index + 1) * golden).
  RandomSource derive(std::uint64_t index) const {
    return RandomSource(splitmix64(seed_ + (index + 1) * 0x9E3779B97F4A7C15ULL));
  }

  static std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Runs fn(trial_index, source) for n trials, each with base.derive(i),
/// spread over hardware threads. Results are returned in trial order.
template <class Fn>
auto run_trials(std::size_t n, const RandomSource& base, Fn fn)
    -> std::vector<std::invoke_result_t<Fn, std::size_t, RandomSource&>> {
  using R = std::invoke_result_t<Fn, std::size_t, RandomSource&>;
  std::vector<R> results(n);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> jobs;
  jobs.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        RandomSource src = base.derive(i);
        results[i] = fn(i, src);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return results;
}

}  // namespace qinfo

#endif  // QINFO_RANDOM_SOURCE_HPP
