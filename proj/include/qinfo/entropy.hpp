#ifndef QINFO_ENTROPY_HPP
#define QINFO_ENTROPY_HPP

// Classical (joint Shannon) and quantum (Von Neumann) entropies over
// word/mode distributions and density matrices. All results are in nats.
//
// Composite indices of a bipartite space A (x) B are row-major:
// i = a * dimB + b, subsystem A being the slow index.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "qinfo/errors.hpp"
#include "qinfo/infocore.hpp"

namespace qinfo {

using cplx = std::complex<double>;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kEigenClamp = 1e-10;

inline double to_bits(double nats) { return nats / std::numbers::ln2; }

/// -p ln p with 0 ln 0 := 0.
inline double entropy_term(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

inline double shannon_entropy(const ProbabilityWeights& w) {
  double s = 0.0;
  for (const auto& [n, p] : w) s += entropy_term(p);
  return s;
}

/// Binary entropy h(p) = -p ln p - (1-p) ln(1-p).
inline double binary_entropy(double p) { return entropy_term(p) + entropy_term(1.0 - p); }

/// Pi(x, y): rows are word indices, columns are mode indices.
class JointDistribution {
 public:
  explicit JointDistribution(Eigen::MatrixXd m) : m_(std::move(m)) {
    detail::require<ValidationError>(m_.size() > 0, "joint distribution is empty");
    detail::require<ValidationError>((m_.array() >= 0.0).all() && m_.allFinite(),
                                     "joint distribution has negative or non-finite entries");
    detail::require<ValidationError>(std::abs(m_.sum() - 1.0) <= kNormTolerance,
                                     "joint distribution does not sum to 1");
  }

  const Eigen::MatrixXd& matrix() const { return m_; }
  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }

 private:
  Eigen::MatrixXd m_;
};

inline double joint_shannon_entropy(const JointDistribution& dist) {
  double s = 0.0;
  const auto& m = dist.matrix();
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) s += entropy_term(m(i, j));
  return s;
}

namespace detail {

// Rounding can push a marginal entry a hair past 1.
inline ProbabilityWeights weights_from(const Eigen::VectorXd& v) {
  std::map<int, double> w;
  for (Eigen::Index i = 0; i < v.size(); ++i) w[static_cast<int>(i)] = std::min(1.0, v(i));
  return ProbabilityWeights(std::move(w));
}

}  // namespace detail

/// Row sums (words) and column sums (modes).
inline std::pair<ProbabilityWeights, ProbabilityWeights> marginals(const JointDistribution& dist) {
  Eigen::VectorXd rows = dist.matrix().rowwise().sum();
  Eigen::VectorXd cols = dist.matrix().colwise().sum().transpose();
  return {detail::weights_from(rows), detail::weights_from(cols)};
}

/// I(X;Y) = S(X) + S(Y) - S(X,Y).
inline double mutual_information(const JointDistribution& dist) {
  auto [px, py] = marginals(dist);
  return shannon_entropy(px) + shannon_entropy(py) - joint_shannon_entropy(dist);
}

class PureState {
 public:
  /// Requires unit norm within 1e-12.
  explicit PureState(Eigen::VectorXcd amplitudes) : v_(std::move(amplitudes)) {
    detail::require<ValidationError>(v_.size() > 0, "state has zero dimension");
    detail::require<ValidationError>(std::abs(v_.norm() - 1.0) <= 1e-12, "state is not normalized");
  }

  /// Rescales any non-zero vector to unit norm.
  static PureState normalized(const Eigen::VectorXcd& v) {
    double n = v.norm();
    detail::require<ValidationError>(n > 0.0 && std::isfinite(n), "cannot normalize a zero vector");
    return PureState(v / n);
  }

  /// Number (computational) basis vector |m>.
  static PureState basis(Eigen::Index dim, Eigen::Index m) {
    detail::require<ShapeError>(m >= 0 && m < dim, "basis index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(m) = 1.0;
    return PureState(std::move(v));
  }

  Eigen::Index dim() const { return v_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return v_; }

  Eigen::MatrixXcd projector() const { return v_ * v_.adjoint(); }

 private:
  Eigen::VectorXcd v_;
};

/// Sorted eigenvalues of a Hermitian matrix.
inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver did not converge");
  return es.eigenvalues();
}

/// -sum l ln l over a spectrum, clamping [-1e-10, 0] to zero.
inline double spectrum_entropy(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double l : eigenvalues) {
    if (l < -kEigenClamp) throw PositivityError("density matrix eigenvalue " + std::to_string(l) + " below -1e-10");
    s += entropy_term(std::max(l, 0.0));
  }
  return s;
}

/// Hermitian, unit-trace, positive semidefinite.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
    detail::require<ShapeError>(rho_.rows() == rho_.cols() && rho_.rows() > 0, "density matrix must be square");
    double asym = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    detail::require<ValidationError>(asym <= kHermitianTolerance, "density matrix is not Hermitian");
    cplx tr = rho_.trace();
    detail::require<ValidationError>(std::abs(tr.real() - 1.0) <= kTraceTolerance &&
                                         std::abs(tr.imag()) <= kHermitianTolerance,
                                     "density matrix trace is not 1");
    eigenvalues_ = hermitian_eigenvalues(rho_);
    if (eigenvalues_(0) < -kEigenClamp) throw PositivityError("density matrix is not positive semidefinite");
  }

  static DensityMatrix from_pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

  static DensityMatrix maximally_mixed(Eigen::Index d) {
    return DensityMatrix(Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
  }

  Eigen::Index dim() const { return rho_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return rho_; }
  /// Ascending.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  Eigen::MatrixXcd rho_;
  Eigen::VectorXd eigenvalues_;
};

/// S(rho) = -tr(rho ln rho).
inline double von_neumann_entropy(const DensityMatrix& rho) {
  const auto& ev = rho.eigenvalues();
  return spectrum_entropy(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())));
}

enum class Subsystem { A, B };

inline DensityMatrix partial_trace(const DensityMatrix& rho, Eigen::Index dimA, Eigen::Index dimB, Subsystem keep) {
  detail::require<ShapeError>(dimA > 0 && dimB > 0 && rho.dim() == dimA * dimB,
                              "partial trace: dimension " + std::to_string(rho.dim()) + " != " +
                                  std::to_string(dimA) + " x " + std::to_string(dimB));
  const auto& m = rho.matrix();
  if (keep == Subsystem::A) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dimA, dimA);
    for (Eigen::Index a = 0; a < dimA; ++a)
      for (Eigen::Index a2 = 0; a2 < dimA; ++a2)
        for (Eigen::Index b = 0; b < dimB; ++b) out(a, a2) += m(a * dimB + b, a2 * dimB + b);
    return DensityMatrix(0.5 * (out + out.adjoint()));
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dimB, dimB);
  for (Eigen::Index b = 0; b < dimB; ++b)
    for (Eigen::Index b2 = 0; b2 < dimB; ++b2)
      for (Eigen::Index a = 0; a < dimA; ++a) out(b, b2) += m(a * dimB + b, a * dimB + b2);
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

/// Entropy of the A-reduction of a bipartite pure state.
inline double entanglement_entropy(const PureState& psi, Eigen::Index dimA, Eigen::Index dimB) {
  detail::require<ShapeError>(dimA > 0 && dimB > 0 && psi.dim() == dimA * dimB,
                              "entanglement entropy: state dimension does not match dimA x dimB");
  return von_neumann_entropy(partial_trace(DensityMatrix::from_pure(psi), dimA, dimB, Subsystem::A));
}

/// rho = sum_i p_i |psi_i><psi_i|; probs are keyed by position in `states`.
inline DensityMatrix density_from_mixture(std::span<const PureState> states, const ProbabilityWeights& probs) {
  detail::require<ShapeError>(!states.empty(), "mixture needs at least one state");
  const Eigen::Index d = states.front().dim();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [i, p] : probs) {
    detail::require<ShapeError>(i >= 0 && static_cast<std::size_t>(i) < states.size(),
                                "mixture weight refers to missing state " + std::to_string(i));
    const auto& s = states[static_cast<std::size_t>(i)];
    detail::require<ShapeError>(s.dim() == d, "mixture states differ in dimension");
    if (p > 0.0) rho.noalias() += p * s.projector();
  }
  for (const auto& s : states) detail::require<ShapeError>(s.dim() == d, "mixture states differ in dimension");
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

}  // namespace qinfo

#endif  // QINFO_ENTROPY_HPP
