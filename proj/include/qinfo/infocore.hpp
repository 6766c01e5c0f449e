#ifndef QINFO_INFOCORE_HPP
#define QINFO_INFOCORE_HPP

// Information quanta, probability-weighted information words, and the
// mappings between information content and energy.

#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "qinfo/errors.hpp"

namespace qinfo {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Largest word index accepted by zeta(); 2^n overflows past this.
inline constexpr int kMaxWordIndex = 1023;

/// Absolute tolerance on the sum of a probability vector.
inline constexpr double kNormTolerance = 1e-12;

enum class UnitSystem { natural, si };

inline std::string to_string(UnitSystem u) { return u == UnitSystem::natural ? "natural" : "si"; }

struct PhysicalConstants {
  double h;     // Planck constant
  double hbar;  // h / 2pi
  double kB;    // Boltzmann constant
  double c;     // speed of light
  double m_e;   // electron rest mass

  /// hbar = kB = c = 1, so h = 2pi. The electron mass is taken as 1.
  static PhysicalConstants natural() { return from_planck(kTwoPi, 1.0, 1.0, 1.0); }

  /// CODATA 2018 exact/recommended values.
  static PhysicalConstants si() {
    return from_planck(6.62607015e-34, 1.380649e-23, 299792458.0, 9.1093837015e-31);
  }

  static PhysicalConstants for_units(UnitSystem u) { return u == UnitSystem::natural ? natural() : si(); }

  /// Builds a set with hbar derived from h; all values must be positive.
  static PhysicalConstants from_planck(double h, double kB, double c, double m_e) {
    detail::require<ValidationError>(h > 0 && kB > 0 && c > 0 && m_e > 0,
                                     "physical constants must be strictly positive");
    return PhysicalConstants{h, h / kTwoPi, kB, c, m_e};
  }
};

/// The information quantum zeta_n = 2^n ln2 / (2 pi).
inline double zeta(int n) {
  if (n < 0 || n > kMaxWordIndex)
    throw DomainError("word index " + std::to_string(n) + " outside [0, " +
                      std::to_string(kMaxWordIndex) + "]");
  return std::ldexp(1.0, n) * std::numbers::ln2 / kTwoPi;
}

struct InformationQuantum {
  int n;
  double value;

  explicit InformationQuantum(int index) : n(index), value(zeta(index)) {}
};

/// Probability Pi(n) of finding word n. Always normalized.
class ProbabilityWeights {
 public:
  ProbabilityWeights() = default;

  explicit ProbabilityWeights(std::map<int, double> weights) : weights_(std::move(weights)) {
    detail::require<ValidationError>(!weights_.empty(), "probability weights are empty");
    double sum = 0.0;
    for (const auto& [n, p] : weights_) {
      detail::require<ValidationError>(n >= 0, "negative word index " + std::to_string(n));
      detail::require<ValidationError>(p >= 0.0 && p <= 1.0,
                                       "probability for word " + std::to_string(n) + " outside [0, 1]");
      sum += p;
    }
    detail::require<ValidationError>(std::abs(sum - 1.0) <= kNormTolerance,
                                     "probability weights sum to " + std::to_string(sum) + ", not 1");
  }

  const std::map<int, double>& map() const { return weights_; }
  std::size_t size() const { return weights_.size(); }

  double at(int n) const {
    auto it = weights_.find(n);
    return it == weights_.end() ? 0.0 : it->second;
  }

  auto begin() const { return weights_.begin(); }
  auto end() const { return weights_.end(); }

 private:
  std::map<int, double> weights_;
};

struct InformationWord {
  ProbabilityWeights weights;
  double value;
};

/// Z = sum_n Pi(n) zeta_n.
inline InformationWord word_information(const ProbabilityWeights& weights) {
  double z = 0.0;
  for (const auto& [n, p] : weights) z += p * zeta(n);
  return InformationWord{weights, z};
}

/// E_0 = h omega / (2 pi), i.e. hbar omega. With zero_point_half the
/// conventional hbar omega / 2 is returned instead.
inline double mode_energy_quantum(double omega, const PhysicalConstants& k, bool zero_point_half = false) {
  detail::require<DomainError>(omega > 0.0, "angular frequency must be positive");
  double e = k.h * omega / kTwoPi;
  return zero_point_half ? 0.5 * e : e;
}

/// E = Z kB T. In natural units kB = 1 and this is E = Z T.
inline double information_energy(double z, double temperature, const PhysicalConstants& k) {
  detail::require<DomainError>(temperature >= 0.0, "temperature must be non-negative");
  return z * k.kB * temperature;
}

/// Photon pair production threshold E >= 2 m0 c^2.
inline bool pair_production_allowed(double energy, double m0, const PhysicalConstants& k) {
  detail::require<DomainError>(energy >= 0.0, "energy must be non-negative");
  detail::require<DomainError>(m0 > 0.0, "rest mass must be positive");
  return energy >= 2.0 * m0 * k.c * k.c;
}

}  // namespace qinfo

#endif  // QINFO_INFOCORE_HPP
