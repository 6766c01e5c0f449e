#ifndef QINFO_SIGNAL_HPP
#define QINFO_SIGNAL_HPP

// Information matrix Z(w), heat-current noise spectral density X(w), and
// the signal power expressions built from them.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "qinfo/errors.hpp"
#include "qinfo/infocore.hpp"

namespace qinfo {

struct InformationMatrixInputs {
  double omega_k;
  double T;
  double S;       // joint / entanglement entropy S(k, n)
  double lambda;  // coupling lambda_{k,n}
  double Pi;      // probability of the word
  double zeta;    // information quantum zeta_n
  PhysicalConstants constants = PhysicalConstants::natural();
};

/// Z(w) = h T^-1 S lambda w_k Pi zeta, evaluated as written. The product
/// is only dimensionless in natural units.
inline double information_matrix_Z(const InformationMatrixInputs& in) {
  detail::require<DomainError>(in.T != 0.0, "information matrix divides by temperature; T = 0");
  detail::require<DomainError>(in.T > 0.0, "temperature must be positive");
  detail::require<DomainError>(in.omega_k > 0.0, "mode frequency must be positive");
  detail::require<DomainError>(in.Pi >= 0.0 && in.Pi <= 1.0, "word probability outside [0, 1]");
  detail::require<DomainError>(in.S >= 0.0, "entropy must be non-negative");
  return in.constants.h / in.T * in.S * in.lambda * in.omega_k * in.Pi * in.zeta;
}

struct NoiseModel {
  double K = 1.0;  // channel material constant
  double T = 0.0;
  PhysicalConstants constants = PhysicalConstants::natural();

  void validate() const {
    detail::require<ValidationError>(K > 0.0, "noise constant K must be positive");
    detail::require<ValidationError>(T >= 0.0, "noise temperature must be non-negative");
  }
};

/// X(w) = (K/pi) [hbar w / 2 + hbar w / (exp(hbar w / kB T) - 1)].
/// The Bose term is 0 at T = 0.
inline double noise_psd(double omega, const NoiseModel& model) {
  detail::require<DomainError>(omega > 0.0, "angular frequency must be positive");
  model.validate();
  const double quantum = model.constants.hbar * omega;
  double bose = 0.0;
  if (model.T > 0.0) {
    const double x = quantum / (model.constants.kB * model.T);
    const double denom = std::expm1(x);
    bose = std::isinf(denom) ? 0.0 : quantum / denom;
  }
  return model.K * quantum / (2.0 * std::numbers::pi) + model.K * bose / std::numbers::pi;
}

enum class DampingKind { constant, exponential };

/// Gamma(t): Gamma0, or Gamma0 exp(-t / tau).
struct Damping {
  DampingKind kind = DampingKind::constant;
  double gamma0 = 0.0;
  double tau = 1.0;

  void validate() const {
    detail::require<ValidationError>(gamma0 >= 0.0, "damping Gamma0 must be non-negative");
    detail::require<ValidationError>(kind == DampingKind::constant || tau > 0.0,
                                     "exponential damping needs tau > 0");
  }

  double operator()(double t) const { return kind == DampingKind::constant ? gamma0 : gamma0 * std::exp(-t / tau); }
};

struct Tone {
  double omega;  // angular frequency, rad/s
  double z;      // information content Z_k
};

/// Tones, noise amplitude M, damping, and the noise environment (which
/// also carries the temperature). A tone of information Z has energy
/// E = Z kB T and is synthesized with mean power E * rate_scale.
struct SignalModel {
  std::vector<Tone> tones;
  double M = 1.0;
  Damping damping;
  NoiseModel noise;
  double rate_scale = 1.0;
  std::uint64_t phase_seed = 0;

  double temperature() const { return noise.T; }

  void validate() const {
    noise.validate();
    damping.validate();
    detail::require<ValidationError>(M >= 0.0, "noise amplitude M must be non-negative");
    detail::require<ValidationError>(rate_scale > 0.0, "rate_scale must be positive");
    for (std::size_t i = 0; i < tones.size(); ++i) {
      detail::require<ValidationError>(tones[i].omega > 0.0, "tone frequencies must be positive");
      detail::require<ValidationError>(tones[i].z >= 0.0, "tone information must be non-negative");
      for (std::size_t j = 0; j < i; ++j)
        detail::require<ValidationError>(tones[i].omega != tones[j].omega, "tone frequencies must be distinct");
    }
  }
};

/// H(t) = Zdot T + M X(w) - Gamma(t).
inline double signal_power_rate(double z_dot, double temperature, const SignalModel& model, double omega, double t) {
  detail::require<DomainError>(t >= 0.0, "time must be non-negative");
  model.validate();
  return z_dot * temperature + model.M * noise_psd(omega, model.noise) - model.damping(t);
}

/// H(t) = Z T / t + M X(w) - Gamma(t). Undefined at t = 0. Negative values
/// are returned as computed.
inline double measured_power(double z, double temperature, double t, const SignalModel& model, double omega) {
  detail::require<DomainError>(t > 0.0, "measured power needs t > 0 (window must start after 0)");
  model.validate();
  return z * temperature / t + model.M * noise_psd(omega, model.noise) - model.damping(t);
}

/// Z = E / (kB T).
inline double invert_information(double energy, double temperature, const PhysicalConstants& k) {
  detail::require<DomainError>(temperature > 0.0, "cannot invert information at T <= 0");
  return energy / (k.kB * temperature);
}

}  // namespace qinfo

#endif  // QINFO_SIGNAL_HPP
