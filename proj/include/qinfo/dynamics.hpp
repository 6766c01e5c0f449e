#ifndef QINFO_DYNAMICS_HPP
#define QINFO_DYNAMICS_HPP

// Single-mode field coupled to a scalar information quantum, realized in a
// truncated Fock space:
//
//   H = hbar w a^dag a + hbar w zeta + (1/2) lambda zeta hbar w (a^dag + a)
//
// One frequency w is used for all three terms.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qinfo/entropy.hpp"
#include "qinfo/errors.hpp"
#include "qinfo/infocore.hpp"

namespace qinfo {

inline constexpr Eigen::Index kDefaultFockDim = 64;
inline constexpr double kDefaultCoupling = 0.1;

struct FockSpace {
  Eigen::Index dim;
  double omega;

  FockSpace(Eigen::Index d, double w) : dim(d), omega(w) {
    detail::require<DomainError>(d >= 2, "Fock truncation must be at least 2, got " + std::to_string(d));
    detail::require<DomainError>(w > 0.0, "mode frequency must be positive");
  }
};

struct LadderOperators {
  Eigen::MatrixXd lower;  // a
  Eigen::MatrixXd raise;  // a^dag
};

/// a has sqrt(m) at (m-1, m).
inline LadderOperators build_ladder(Eigen::Index dim) {
  detail::require<DomainError>(dim >= 2, "Fock truncation must be at least 2, got " + std::to_string(dim));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index m = 1; m < dim; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
  Eigen::MatrixXd ad = a.transpose();
  return {std::move(a), std::move(ad)};
}

/// a^dag a, exactly diagonal.
inline Eigen::MatrixXd number_operator(Eigen::Index dim) {
  Eigen::VectorXd diag = Eigen::VectorXd::LinSpaced(dim, 0.0, static_cast<double>(dim - 1));
  return diag.asDiagonal();
}

class HamiltonianModel {
 public:
  HamiltonianModel(FockSpace space, double zeta, double lambda, PhysicalConstants constants)
      : space_(space), zeta_(zeta), lambda_(lambda), constants_(constants) {
    detail::require<DomainError>(zeta >= 0.0, "information quantum must be non-negative");
    const Eigen::Index d = space.dim;
    const double quantum = constants.hbar * space.omega;
    const double coupling = 0.5 * lambda * zeta * quantum;
    h_ = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index m = 0; m < d; ++m) h_(m, m) = quantum * static_cast<double>(m) + quantum * zeta;
    // (a^dag + a) has sqrt(m+1) on both off-diagonals.
    for (Eigen::Index m = 0; m + 1 < d; ++m) {
      const double v = coupling * std::sqrt(static_cast<double>(m + 1));
      h_(m, m + 1) = v;
      h_(m + 1, m) = v;
    }
  }

  const FockSpace& space() const { return space_; }
  double zeta() const { return zeta_; }
  double lambda() const { return lambda_; }
  const PhysicalConstants& constants() const { return constants_; }
  const Eigen::MatrixXd& matrix() const { return h_; }
  Eigen::Index dim() const { return space_.dim; }

 private:
  FockSpace space_;
  double zeta_;
  double lambda_;
  PhysicalConstants constants_;
  Eigen::MatrixXd h_;
};

inline HamiltonianModel build_hamiltonian(const FockSpace& space, double zeta, double lambda,
                                          const PhysicalConstants& constants) {
  return HamiltonianModel(space, zeta, lambda, constants);
}

struct Eigensystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

/// Dense diagonalization with a reconstruction check.
inline Eigensystem diagonalize(const HamiltonianModel& model) {
  const auto& h = model.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw ConvergenceError("Hamiltonian eigensolver did not converge");
  Eigensystem sys{es.eigenvalues(), es.eigenvectors()};
  const double scale = h.cwiseAbs().maxCoeff();
  const double err = (h - sys.vectors * sys.values.asDiagonal() * sys.vectors.transpose()).cwiseAbs().maxCoeff();
  if (err > 1e-9 * scale) throw ConvergenceError("eigendecomposition reconstruction error " + std::to_string(err));
  return sys;
}

inline std::vector<double> eigen_spectrum(const HamiltonianModel& model) {
  auto sys = diagonalize(model);
  return {sys.values.data(), sys.values.data() + sys.values.size()};
}

/// Completing the square in (a^dag + a): hbar w (zeta - (lambda zeta / 2)^2).
inline double ground_energy_analytic(double omega, double zeta, double lambda, const PhysicalConstants& k) {
  const double g = 0.5 * lambda * zeta;
  return k.hbar * omega * (zeta - g * g);
}

/// <psi|O|psi> for a Hermitian O.
inline double expectation(const PureState& psi, const Eigen::MatrixXcd& op) {
  detail::require<ShapeError>(op.rows() == psi.dim() && op.cols() == psi.dim(),
                              "operator and state dimensions differ");
  detail::require<ValidationError>((op - op.adjoint()).cwiseAbs().maxCoeff() <= kHermitianTolerance,
                                   "operator is not Hermitian");
  const auto& v = psi.amplitudes();
  cplx e = v.dot(op * v);  // dot conjugates the left operand
  if (std::abs(e.imag()) > 1e-10 * std::max(1.0, std::abs(e.real())))
    throw ValidationError("expectation value has an imaginary part");
  return e.real();
}

inline double expectation(const PureState& psi, const Eigen::MatrixXd& op) {
  return expectation(psi, Eigen::MatrixXcd(op.cast<cplx>()));
}

struct EvolutionResult {
  std::vector<double> times;
  std::vector<PureState> states;
  std::vector<double> number;  // <a^dag a>
  std::vector<double> energy;  // <H>
};

/// psi(t_j) = exp(-i H t_j / hbar) psi(0) on t_j = j t / steps, j = 0..steps.
inline EvolutionResult evolve(const PureState& initial, const HamiltonianModel& model, double t, int steps) {
  detail::require<ShapeError>(initial.dim() == model.dim(), "state dimension does not match the Hamiltonian");
  detail::require<DomainError>(t >= 0.0, "evolution time must be non-negative");
  detail::require<DomainError>(steps >= 1, "evolution needs at least one step");

  const auto sys = diagonalize(model);
  const Eigen::MatrixXcd v = sys.vectors.cast<cplx>();
  const Eigen::VectorXcd coeffs = v.adjoint() * initial.amplitudes();
  const Eigen::MatrixXcd number = number_operator(model.dim()).cast<cplx>();
  const Eigen::MatrixXcd h = model.matrix().cast<cplx>();
  const double hbar = model.constants().hbar;

  EvolutionResult out;
  out.times.reserve(steps + 1);
  out.states.reserve(steps + 1);
  for (int j = 0; j <= steps; ++j) {
    const double tj = t * static_cast<double>(j) / static_cast<double>(steps);
    Eigen::VectorXcd phased(coeffs.size());
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
      phased(i) = coeffs(i) * std::polar(1.0, -sys.values(i) * tj / hbar);
    Eigen::VectorXcd psi = j == 0 ? initial.amplitudes() : Eigen::VectorXcd(v * phased);
    double norm = psi.norm();
    if (std::abs(norm - 1.0) > 1e-10) throw ConvergenceError("evolution lost normalization");
    PureState state(psi / norm);
    out.number.push_back(expectation(state, number));
    out.energy.push_back(expectation(state, h));
    out.times.push_back(tj);
    out.states.push_back(std::move(state));
  }
  return out;
}

}  // namespace qinfo

#endif  // QINFO_DYNAMICS_HPP
