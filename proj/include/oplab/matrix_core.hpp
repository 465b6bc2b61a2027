#ifndef OPLAB_MATRIX_CORE_HPP
#define OPLAB_MATRIX_CORE_HPP

// Dense complex-matrix spectral primitives. Everything here is a pure
// function of its arguments; all functions accept Eigen expressions.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "oplab/types.hpp"

namespace oplab {

/// Conjugate transpose as a plain value. adjoint(adjoint(m)) == m exactly.
template <typename Derived>
Matrix adjoint(const Eigen::MatrixBase<Derived>& m) {
  return m.adjoint();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

namespace detail {

// Relative Hermiticity residual ||h - h*||_F / ||h||_F (0 for the zero matrix).
inline double hermiticity_residual(const Matrix& h) {
  const double scale = h.norm();
  if (scale == 0.0) return 0.0;
  return (h - h.adjoint()).norm() / scale;
}

inline void require_hermitian(const Matrix& h, const Tolerances& tol, const char* who) {
  if (h.rows() != h.cols()) throw NotHermitianError(std::string(who) + ": matrix is not square");
  if (hermiticity_residual(h) > tol.eq_tol)
    throw NotHermitianError(std::string(who) + ": Hermiticity residual exceeds eq_tol");
}

// Eigendecomposition of the symmetrized input, eigenvalues ascending.
inline Eigen::SelfAdjointEigenSolver<Matrix> hermitian_eig(const Matrix& h) {
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw NoConvergenceError("hermitian eigensolver failed");
  return es;
}

}  // namespace detail

/// All dim real eigenvalues of a Hermitian matrix, ascending.
/// The input is symmetrized as (h + h*)/2 before solving.
template <typename Derived>
RealVector hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& h, const Tolerances& tol = {}) {
  const Matrix hm = h.derived();
  detail::require_hermitian(hm, tol, "hermitian_eigenvalues");
  return detail::hermitian_eig(hm).eigenvalues();
}

/// Minimum eigenvalue of a Hermitian matrix. The caller declares PSD
/// iff the returned margin is >= -psd_tol.
template <typename Derived>
double psd_margin(const Eigen::MatrixBase<Derived>& h, const Tolerances& tol = {}) {
  const Matrix hm = h.derived();
  detail::require_hermitian(hm, tol, "psd_margin");
  const Matrix sym = 0.5 * (hm + hm.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Largest singular value, computed as sqrt(max eig of m*m).
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& m) {
  const Matrix mm = m.derived();
  if (mm.size() == 0) return 0.0;
  const Matrix gram = mm.adjoint() * mm;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues()(gram.rows() - 1);
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

/// Smallest singular value, sqrt(min eig of m*m).
template <typename Derived>
double sigma_min(const Eigen::MatrixBase<Derived>& m) {
  const Matrix mm = m.derived();
  if (mm.size() == 0) return 0.0;
  const Matrix gram = mm.adjoint() * mm;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  const double bottom = es.eigenvalues()(0);
  return bottom > 0.0 ? std::sqrt(bottom) : 0.0;
}

/// Spectral radius r(m) = lim ||m^n||^(1/n), by Gelfand iteration with
/// repeated squaring. The running power is renormalized each step so the
/// accumulated norm lives in log space; a nilpotent input hits an exact
/// zero power and returns 0.
///
/// Throws NoConvergenceError when max_doublings squarings do not bring two
/// successive estimates within spec_tol relatively.
template <typename Derived>
double spectral_radius(const Eigen::MatrixBase<Derived>& m, const Tolerances& tol = {},
                       int max_doublings = 60) {
  Matrix cur = m.derived();
  double nrm = operator_norm(cur);
  if (nrm == 0.0) return 0.0;

  // cur = m^p / exp(log_norm), ||cur|| = 1, log_norm = log ||m^p||.
  double log_norm = std::log(nrm);
  double power = 1.0;
  cur /= nrm;
  double estimate = nrm;

  for (int k = 0; k < max_doublings; ++k) {
    const Matrix squared = cur * cur;
    const double s = operator_norm(squared);
    if (s == 0.0) return 0.0;
    log_norm = 2.0 * log_norm + std::log(s);
    power *= 2.0;
    cur = squared / s;
    const double next = std::exp(log_norm / power);
    if (std::abs(next - estimate) <= tol.spec_tol * std::max(next, estimate)) return next;
    estimate = next;
  }
  throw NoConvergenceError("spectral_radius: Gelfand iteration did not stabilize");
}

namespace detail {

// U f(diag) U* for a Hermitian input, with an eigenvalue map.
template <typename Fn>
Matrix hermitian_function(const Matrix& h, Fn&& f) {
  const auto es = hermitian_eig(h);
  RealVector vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) vals(i) = f(vals(i));
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// Fractional power of a PSD Hermitian matrix via eigendecomposition.
/// Eigenvalues in [-psd_tol, 0) are clamped to 0; anything below -psd_tol
/// is NotPsdError.
template <typename Derived>
Matrix hermitian_power(const Eigen::MatrixBase<Derived>& h, double p, const Tolerances& tol = {}) {
  const Matrix hm = h.derived();
  detail::require_hermitian(hm, tol, "hermitian_power");
  if (!(p > 0.0)) throw Error("hermitian_power: exponent must be positive");
  const double margin = psd_margin(hm, tol);
  if (margin < -tol.psd_tol) throw NotPsdError("hermitian_power: matrix is not PSD within psd_tol");
  return detail::hermitian_function(hm, [p](double v) { return v > 0.0 ? std::pow(v, p) : 0.0; });
}

/// Matrix logarithm of a strictly positive definite Hermitian matrix.
template <typename Derived>
Matrix hermitian_log(const Eigen::MatrixBase<Derived>& h, const Tolerances& tol = {}) {
  const Matrix hm = h.derived();
  detail::require_hermitian(hm, tol, "hermitian_log");
  const double margin = psd_margin(hm, tol);
  if (margin <= tol.psd_tol)
    throw NotPositiveDefiniteError("hermitian_log: matrix is not strictly positive definite");
  return detail::hermitian_function(hm, [](double v) { return std::log(v); });
}

namespace detail {

// hermitian_log with eigenvalues floored at a caller-chosen positive value;
// used where invertibility was already gated on sigma_min rather than on
// an absolute eigenvalue margin.
inline Matrix hermitian_log_floored(const Matrix& h, double floor_value) {
  return hermitian_function(h, [floor_value](double v) { return std::log(std::max(v, floor_value)); });
}

}  // namespace detail

/// Norm/spectrum summary of one operator.
struct SpectralReport {
  double op_norm = 0.0;
  double spectral_radius = 0.0;
  double sigma_min = 0.0;
  std::vector<std::pair<int, double>> power_norms;  // (n, ||m^n||)
};

template <typename Derived>
SpectralReport spectral_report(const Eigen::MatrixBase<Derived>& m, const Tolerances& tol = {},
                               int n_max = 8) {
  const Matrix mm = m.derived();
  SpectralReport report;
  report.op_norm = operator_norm(mm);
  report.spectral_radius = spectral_radius(mm, tol);
  report.sigma_min = sigma_min(mm);
  Matrix power = Matrix::Identity(mm.rows(), mm.cols());
  for (int n = 1; n <= n_max; ++n) {
    power = power * mm;
    report.power_norms.emplace_back(n, operator_norm(power));
  }
  return report;
}

}  // namespace oplab

#endif  // OPLAB_MATRIX_CORE_HPP
