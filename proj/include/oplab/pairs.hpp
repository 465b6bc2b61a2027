#ifndef OPLAB_PAIRS_HPP
#define OPLAB_PAIRS_HPP

// Construction and certification of lambda-commuting pairs AB = lambda BA,
// plus the seeded single-matrix generators used by the theorem harness.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oplab/types.hpp"

namespace oplab {

/// Extracted scalar of the relation AB = lambda BA, with the normalized
/// residual ||AB - lambda BA||_F / (||A|| ||B|| sqrt(dim)) doubling as the
/// certificate. A certificate is valid iff it is not degenerate and the
/// residual is <= eq_tol.
struct CommutationCertificate {
  Complex lambda{0.0, 0.0};
  double residual = 0.0;
  bool ab_nonzero = false;
  bool degenerate = false;
  /// Smallest m <= dim^2 with |lambda^m - 1| <= eq_tol, when one exists.
  std::optional<int> unity_order;

  double modulus() const { return std::abs(lambda); }
  bool valid(const Tolerances& tol = {}) const {
    return !degenerate && residual <= tol.eq_tol;
  }
};

struct Pair {
  Matrix a;
  Matrix b;
  CommutationCertificate certificate;
};

/// Least-squares extraction of lambda: the minimizer of ||AB - lambda BA||_F.
/// Total function; degeneracy and invalidity are flags on the certificate.
CommutationCertificate certify_pair(const Matrix& A, const Matrix& B, const Tolerances& tol = {});

/// Strict variant: throws DegeneratePairError when both AB and BA vanish
/// (lambda unconstrained) and NotLambdaCommutingError when the residual
/// exceeds eq_tol.
CommutationCertificate extract_lambda(const Matrix& A, const Matrix& B, const Tolerances& tol = {});

/// The clock-and-shift pair on C^n: A the cyclic shift, B = diag(1, w, ...,
/// w^(n-1)) with w = exp(2*pi*i/n), satisfying AB = w BA. Both are unitary.
Pair clock_shift_pair(int n, const Tolerances& tol = {});

/// (alpha A, beta B) keeps the same lambda. Throws ZeroScaleError.
Pair scaled_pair(const Pair& pair, Complex alpha, Complex beta, const Tolerances& tol = {});

/// Block-diagonal direct sum; all inputs must share one lambda within eq_tol.
Pair direct_sum_pair(const std::vector<Pair>& pairs, const Tolerances& tol = {});

// --- seeded single-matrix generators --- //

Matrix jordan_block(int n, Complex a);

/// Truncated shift with the given subdiagonal weights; dim = weights + 1.
Matrix weighted_shift(const std::vector<double>& weights);

Matrix random_ginibre(int n, std::uint64_t seed);

/// QR orthonormalization of a seeded complex Gaussian matrix, column phases
/// normalized so the triangular factor has a positive diagonal.
Matrix random_unitary(int n, std::uint64_t seed);

/// U diag(z) U* for seeded Haar-ish U and complex Gaussian z.
Matrix random_normal(int n, std::uint64_t seed);

/// Seeded Ginibre matrix scaled to operator norm <= 1.
Matrix random_contraction(int n, std::uint64_t seed);

// --- recipes --- //

enum class PairFamily { clock_shift, scaled, direct_sum, diagonal_commuting, custom };

struct PairRecipe {
  PairFamily family = PairFamily::clock_shift;
  int dim = 2;
  std::vector<int> components;  // direct_sum: clock dimensions (all equal)
  Complex alpha{1.0, 0.0};      // scaled
  Complex beta{1.0, 0.0};       // scaled
  std::uint64_t seed = 0;
  std::optional<Pair> custom;
};

/// Deterministic construction per recipe + seed. Throws BadRecipeError.
Pair make_instance(const PairRecipe& recipe, const Tolerances& tol = {});

std::optional<PairFamily> pair_family_from_string(const std::string& name);
std::string to_string(PairFamily family);

}  // namespace oplab

#endif  // OPLAB_PAIRS_HPP
