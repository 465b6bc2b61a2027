#ifndef OPLAB_TESTS_ORACLES_HPP
#define OPLAB_TESTS_ORACLES_HPP

// Independent oracles used by the tests: closed forms and brute-force
// enumeration, never the library code paths they are checking.

#include <cmath>
#include <functional>
#include <random>
#include <utility>

#include "oplab/types.hpp"

namespace oracle {

using oplab::Complex;
using oplab::Matrix;
using oplab::Vector;

// Closed-form eigenvalues of a 2x2 Hermitian matrix, ascending.
inline std::pair<double, double> eig2x2(const Matrix& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double mid = 0.5 * (a + d);
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(h(0, 1)));
  return {mid - disc, mid + disc};
}

inline Matrix pauli_x() {
  Matrix x(2, 2);
  x << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  return x;
}

inline Matrix pauli_z() {
  Matrix z(2, 2);
  z << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0);
  return z;
}

inline Matrix jordan2() {
  Matrix j(2, 2);
  j << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
  return j;
}

// Dense scan of a phase-invariant objective over the unit sphere of C^2:
// x(theta, phi) = (cos theta, e^{i phi} sin theta).
inline double sphere2_grid_min(const std::function<double(const Vector&)>& f, int steps = 361) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    const double theta = 0.5 * M_PI * i / steps;
    for (int j = 0; j < 2 * steps; ++j) {
      const double phi = M_PI * j / steps;
      Vector x(2);
      x << Complex(std::cos(theta), 0.0),
          Complex(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi));
      best = std::min(best, f(x));
    }
  }
  return best;
}

inline Vector random_unit(std::mt19937_64& gen, int dim) {
  std::normal_distribution<double> normal;
  Vector x(dim);
  for (int i = 0; i < dim; ++i) x(i) = Complex(normal(gen), normal(gen));
  return x / x.norm();
}

}  // namespace oracle

#endif
