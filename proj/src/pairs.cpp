#include "oplab/pairs.hpp"

#include <cmath>
#include <random>

#include "oplab/matrix_core.hpp"

namespace oplab {

namespace {

double uniform01(std::mt19937_64& gen) {
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return u > 0.0 ? u : 0x1.0p-53;
}

Complex complex_gauss(std::mt19937_64& gen) {
  const double u1 = uniform01(gen);
  const double u2 = uniform01(gen);
  const double rad = std::sqrt(-2.0 * std::log(u1));
  return Complex(rad * std::cos(2.0 * M_PI * u2), rad * std::sin(2.0 * M_PI * u2));
}

Matrix ginibre(std::mt19937_64& gen, int n) {
  Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = complex_gauss(gen);
  return g;
}

// exp(2 pi i j / n), exact at the quadrant angles
Complex root_of_unity(int j, int n) {
  j = ((j % n) + n) % n;
  if (4 * j % n == 0) {
    switch ((4 * j / n) % 4) {
      case 0: return Complex(1.0, 0.0);
      case 1: return Complex(0.0, 1.0);
      case 2: return Complex(-1.0, 0.0);
      default: return Complex(0.0, -1.0);
    }
  }
  const double angle = 2.0 * M_PI * j / n;
  return Complex(std::cos(angle), std::sin(angle));
}

std::optional<int> unity_order_of(Complex lambda, int dim, double eq_tol) {
  Complex power(1.0, 0.0);
  const int cap = dim * dim;
  for (int m = 1; m <= cap; ++m) {
    power *= lambda;
    if (std::abs(power - Complex(1.0, 0.0)) <= eq_tol) return m;
  }
  return std::nullopt;
}

}  // namespace

CommutationCertificate certify_pair(const Matrix& A, const Matrix& B, const Tolerances& tol) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw Error("certify_pair: operators must be square and of equal dimension");
  CommutationCertificate cert;
  const auto dim = A.rows();
  const double na = operator_norm(A);
  const double nb = operator_norm(B);
  const double scale = na * nb;
  if (scale == 0.0) {
    cert.degenerate = true;
    return cert;
  }

  const Matrix AB = A * B;
  const Matrix BA = B * A;
  const double ab_f = AB.norm();
  const double ba_f = BA.norm();
  cert.ab_nonzero = ab_f > tol.eq_tol * scale;

  if (ba_f <= tol.eq_tol * scale && !cert.ab_nonzero) {
    cert.degenerate = true;  // lambda unconstrained
    return cert;
  }
  if (ba_f > 0.0) {
    // least-squares minimizer of ||AB - lambda BA||_F
    cert.lambda = (BA.adjoint() * AB).trace() / Complex(ba_f * ba_f, 0.0);
  }
  cert.residual = (AB - cert.lambda * BA).norm() / (scale * std::sqrt(double(dim)));
  if (cert.valid(tol)) cert.unity_order = unity_order_of(cert.lambda, int(dim), tol.eq_tol);
  return cert;
}

CommutationCertificate extract_lambda(const Matrix& A, const Matrix& B, const Tolerances& tol) {
  CommutationCertificate cert = certify_pair(A, B, tol);
  if (cert.degenerate)
    throw DegeneratePairError("extract_lambda: AB and BA both vanish, lambda unconstrained");
  if (cert.residual > tol.eq_tol)
    throw NotLambdaCommutingError("extract_lambda: residual " + std::to_string(cert.residual) +
                                  " exceeds eq_tol");
  return cert;
}

Pair clock_shift_pair(int n, const Tolerances& tol) {
  if (n < 2) throw BadRecipeError("clock_shift_pair: dimension must be >= 2");
  Matrix shift = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) shift(j, (j + 1) % n) = Complex(1.0, 0.0);
  Matrix clock = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) clock(j, j) = root_of_unity(j, n);
  Pair pair{std::move(shift), std::move(clock), {}};
  pair.certificate = certify_pair(pair.a, pair.b, tol);
  return pair;
}

Pair scaled_pair(const Pair& pair, Complex alpha, Complex beta, const Tolerances& tol) {
  if (std::abs(alpha) == 0.0 || std::abs(beta) == 0.0)
    throw ZeroScaleError("scaled_pair: scale factors must be nonzero");
  if (!pair.certificate.valid(tol))
    throw InvalidCertificateError("scaled_pair: input certificate is not valid");
  Pair out{alpha * pair.a, beta * pair.b, {}};
  out.certificate = certify_pair(out.a, out.b, tol);
  return out;
}

Pair direct_sum_pair(const std::vector<Pair>& pairs, const Tolerances& tol) {
  if (pairs.empty()) throw BadRecipeError("direct_sum_pair: need at least one summand");
  Eigen::Index total = 0;
  for (const auto& p : pairs) {
    if (!p.certificate.valid(tol))
      throw InvalidCertificateError("direct_sum_pair: summand certificate is not valid");
    if (std::abs(p.certificate.lambda - pairs.front().certificate.lambda) > tol.eq_tol)
      throw MismatchedLambdaError("direct_sum_pair: summands have different lambdas");
    total += p.a.rows();
  }
  Matrix A = Matrix::Zero(total, total);
  Matrix B = Matrix::Zero(total, total);
  Eigen::Index offset = 0;
  for (const auto& p : pairs) {
    const auto d = p.a.rows();
    A.block(offset, offset, d, d) = p.a;
    B.block(offset, offset, d, d) = p.b;
    offset += d;
  }
  Pair out{std::move(A), std::move(B), {}};
  out.certificate = certify_pair(out.a, out.b, tol);
  return out;
}

Matrix jordan_block(int n, Complex a) {
  if (n < 1) throw BadRecipeError("jordan_block: dimension must be >= 1");
  Matrix j = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) j(i, i) = a;
  for (int i = 0; i + 1 < n; ++i) j(i, i + 1) = Complex(1.0, 0.0);
  return j;
}

Matrix weighted_shift(const std::vector<double>& weights) {
  const int n = static_cast<int>(weights.size()) + 1;
  Matrix t = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) t(i + 1, i) = Complex(weights[size_t(i)], 0.0);
  return t;
}

Matrix random_ginibre(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return ginibre(gen, n);
}

Matrix random_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const Matrix g = ginibre(gen, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mod = std::abs(d);
    q.col(j) *= mod > 0.0 ? d / mod : Complex(1.0, 0.0);
  }
  return q;
}

Matrix random_normal(int n, std::uint64_t seed) {
  const Matrix u = random_unitary(n, seed);
  std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ull);
  Vector z(n);
  for (int i = 0; i < n; ++i) z(i) = complex_gauss(gen);
  return u * z.asDiagonal() * u.adjoint();
}

Matrix random_contraction(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed ^ 0xd1b54a32d192ed03ull);
  const Matrix g = ginibre(gen, n);
  const double target = 0.2 + 0.8 * uniform01(gen);
  const double nrm = operator_norm(g);
  if (nrm == 0.0) return g;
  return g * (target / nrm);
}

Pair make_instance(const PairRecipe& recipe, const Tolerances& tol) {
  switch (recipe.family) {
    case PairFamily::clock_shift:
      return clock_shift_pair(recipe.dim, tol);
    case PairFamily::scaled:
      return scaled_pair(clock_shift_pair(recipe.dim, tol), recipe.alpha, recipe.beta, tol);
    case PairFamily::direct_sum: {
      if (recipe.components.empty())
        throw BadRecipeError("make_instance: direct_sum needs component dimensions");
      std::vector<Pair> parts;
      parts.reserve(recipe.components.size());
      for (int d : recipe.components) parts.push_back(clock_shift_pair(d, tol));
      return direct_sum_pair(parts, tol);
    }
    case PairFamily::diagonal_commuting: {
      if (recipe.dim < 1) throw BadRecipeError("make_instance: dimension must be >= 1");
      std::mt19937_64 gen(recipe.seed);
      Matrix A = Matrix::Zero(recipe.dim, recipe.dim);
      Matrix B = Matrix::Zero(recipe.dim, recipe.dim);
      for (int i = 0; i < recipe.dim; ++i) {
        // A invertible by construction: moduli bounded away from zero
        const double phase = 2.0 * M_PI * uniform01(gen);
        const double mod = 0.5 + 1.5 * uniform01(gen);
        A(i, i) = Complex(mod * std::cos(phase), mod * std::sin(phase));
        B(i, i) = complex_gauss(gen);
      }
      Pair pair{std::move(A), std::move(B), {}};
      pair.certificate = certify_pair(pair.a, pair.b, tol);
      return pair;
    }
    case PairFamily::custom:
      if (!recipe.custom) throw BadRecipeError("make_instance: custom recipe has no matrices");
      return *recipe.custom;
  }
  throw BadRecipeError("make_instance: unknown family");
}

std::optional<PairFamily> pair_family_from_string(const std::string& name) {
  if (name == "clock_shift") return PairFamily::clock_shift;
  if (name == "scaled") return PairFamily::scaled;
  if (name == "direct_sum") return PairFamily::direct_sum;
  if (name == "diagonal_commuting") return PairFamily::diagonal_commuting;
  if (name == "custom") return PairFamily::custom;
  return std::nullopt;
}

std::string to_string(PairFamily family) {
  switch (family) {
    case PairFamily::clock_shift: return "clock_shift";
    case PairFamily::scaled: return "scaled";
    case PairFamily::direct_sum: return "direct_sum";
    case PairFamily::diagonal_commuting: return "diagonal_commuting";
    case PairFamily::custom: return "custom";
  }
  return "?";
}

}  // namespace oplab
