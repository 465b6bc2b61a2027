#ifndef OPLAB_CLASSES_HPP
#define OPLAB_CLASSES_HPP

// Tolerance-aware membership predicates for the operator classes, each
// reporting a signed margin and, where falsified, a unit witness vector.
//
// Margins are scale covariant: PSD-type margins are evaluated on T/||T||,
// identity-residual margins are relative to the products of the factors'
// operator norms. Membership for a PSD-margin class is margin >= -psd_tol.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oplab/types.hpp"

namespace oplab {

enum class Verdict { member, nonmember, inapplicable };

std::string_view to_string(Verdict v);

/// A unit vector violating a defining inequality, with the measured defect.
struct Witness {
  Vector vector;
  double violation = 0.0;
};

struct ClassParams {
  std::optional<double> p;
  std::optional<int> k;
  std::optional<double> M;  // +infinity is an in-band value
};

struct ClassEntry {
  std::string class_id;
  Verdict verdict = Verdict::inapplicable;
  double margin = 0.0;
  std::string method;  // psd | residual | family | sphere | spectral | none
  std::optional<Witness> witness;
  ClassParams params;
  std::string note;
};

struct ClassReport {
  int dim = 0;
  double op_norm = 0.0;
  std::vector<ClassEntry> entries;

  const ClassEntry& at(std::string_view class_id) const;
  bool is_member(std::string_view class_id) const;
};

/// Minimum over lambda in (0, cap] of the smallest eigenvalue of
/// P - 2*lambda*Q + lambda^2*R, for Hermitian PSD P, Q, R.
struct FamilyCheckResult {
  double min_margin = 0.0;
  double argmin_lambda = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};  // (lo, hi), lo <= argmin <= hi
  Vector argmin_vector;
};

FamilyCheckResult family_psd_min(const Matrix& P, const Matrix& Q, const Matrix& R,
                                 const Tolerances& tol = {});

/// Closed-form inner minimization of the same family quadratic at a fixed
/// vector: min over lambda in [lo, hi] of x*(P - 2*lambda*Q + lambda^2*R)x.
double family_pointwise_value(const Matrix& P, const Matrix& Q, const Matrix& R, double lo,
                              double hi, const Vector& x);

struct SphereMinControl {
  int max_iters = 200;
  double grad_step = 1e-6;
  double grad_tol = 1e-10;
  double init_step = 0.5;
};

struct SphereMinResult {
  double value = 0.0;
  Vector argmin;
};

/// Multi-start projected-gradient minimization of a real objective over the
/// complex unit sphere. Deterministic given the seed; starts are the
/// coordinate vectors, the uniform vector, and `restarts` seeded random unit
/// vectors. Soundness is one-sided: a negative value is a certified
/// violation, a nonnegative value is evidence only.
SphereMinResult sphere_min(const std::function<double(const Vector&)>& objective, int dim,
                           int restarts, std::uint64_t seed, const SphereMinControl& control = {});

// --- per-class predicates (all scale covariant) --- //

double self_adjoint_margin(const Matrix& T);
double normal_margin(const Matrix& T);
double quasinormal_margin(const Matrix& T);
double binormal_margin(const Matrix& T);

/// Literal isometry residual -||T*T - I||_F of the matrix as given.
double isometry_margin(const Matrix& T);

double hyponormal_margin(const Matrix& T, const Tolerances& tol = {});
double p_hyponormal_margin(const Matrix& T, double p, const Tolerances& tol = {});
double p_quasihyponormal_margin(const Matrix& T, double p, const Tolerances& tol = {});
double class_a_margin(const Matrix& T, const Tolerances& tol = {});
double m_hyponormal_margin(const Matrix& T, double M, const Tolerances& tol = {});

FamilyCheckResult paranormal_check(const Matrix& T, const Tolerances& tol = {});
FamilyCheckResult star_paranormal_check(const Matrix& T, const Tolerances& tol = {});
FamilyCheckResult quasi_star_paranormal_check(const Matrix& T, const Tolerances& tol = {});

/// Sphere-search evidence for ||T^k x|| ||x||^(k-1) >= ||Tx||^k; one-sided.
SphereMinResult k_hyponormal_evidence(const Matrix& T, int k, int restarts, std::uint64_t seed,
                                      const SphereMinControl& control = {});

/// Least M with TT* <= M T*T, or +infinity when TT* has mass on the kernel
/// of T*T. Computed from the generalized Rayleigh quotient on range(T*T).
double minimal_M_constant(const Matrix& T, const Tolerances& tol = {});

/// Matrix of T restricted to the column span of an orthonormal, T-invariant
/// basis: V*TV.
Matrix restrict_to_invariant(const Matrix& T, const Matrix& basis, const Tolerances& tol = {});

struct ClassifyOptions {
  double p = 0.5;            // exponent for the p-classes
  int k = 2;                 // exponent for the k-hyponormal entry
  std::optional<double> M;   // fixed M-hyponormal constant; default = minimal
  bool k_hyponormal = true;  // the sphere-based entry dominates the cost
  int sphere_restarts = 8;
  std::uint64_t sphere_seed = 1;
  SphereMinControl sphere_control{};
};

/// Evaluate every class predicate on T. Never throws; per-class
/// inapplicability is encoded in the report.
ClassReport classify(const Matrix& T, const Tolerances& tol = {}, const ClassifyOptions& opts = {});

}  // namespace oplab

#endif  // OPLAB_CLASSES_HPP
