#ifndef OPLAB_TYPES_HPP
#define OPLAB_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace oplab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr const char* kToolVersion = "0.1.0";

/// Numerical gates shared by every predicate and verifier.
///
/// eq_tol      relative tolerance for matrix-identity residuals
/// psd_tol     absolute eigenvalue floor for PSD verdicts
/// spec_tol    convergence tolerance for the spectral-radius iteration
/// margin_gate strict-membership multiplier separating noise from defects
struct Tolerances {
  double eq_tol = 1e-10;
  double psd_tol = 1e-9;
  double spec_tol = 1e-8;
  double margin_gate = 10.0;
};

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NotHermitianError : Error {
  using Error::Error;
};
struct NotPsdError : Error {
  using Error::Error;
};
struct NotPositiveDefiniteError : Error {
  using Error::Error;
};
struct NoConvergenceError : Error {
  using Error::Error;
};
struct NotPsdInputError : Error {
  using Error::Error;
};
struct NotOrthonormalError : Error {
  using Error::Error;
};
struct NotInvariantError : Error {
  using Error::Error;
};
struct ZeroScaleError : Error {
  using Error::Error;
};
struct MismatchedLambdaError : Error {
  using Error::Error;
};
struct BadRecipeError : Error {
  using Error::Error;
};
struct DegeneratePairError : Error {
  using Error::Error;
};
struct NotLambdaCommutingError : Error {
  using Error::Error;
};
struct InvalidCertificateError : Error {
  using Error::Error;
};
struct UnknownTheoremError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace oplab

#endif  // OPLAB_TYPES_HPP
