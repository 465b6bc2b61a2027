#ifndef OPLAB_THEOREMS_HPP
#define OPLAB_THEOREMS_HPP

// Executable checks for the lemmas and theorems on lambda-commuting pairs:
// each verifier evaluates its premises with signed margins, evaluates the
// conclusion, and classifies the outcome as confirmed, vacuous, or violated.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oplab/classes.hpp"
#include "oplab/pairs.hpp"
#include "oplab/types.hpp"

namespace oplab {

enum class TheoremStatus { confirmed, vacuous, violated };

std::string_view to_string(TheoremStatus s);

/// A premise holds when its margin is >= -psd_tol. The verdict is vacuous
/// when some premise fails, violated when the premises hold and the
/// conclusion fails by more than margin_gate * psd_tol, and confirmed
/// otherwise (conclusion shortfalls inside the gate count as noise).
struct TheoremVerdict {
  std::string theorem_id;
  std::vector<std::pair<std::string, double>> premise_margins;
  double conclusion_margin = 0.0;
  TheoremStatus status = TheoremStatus::vacuous;
  std::string inputs_digest;
  std::string notes;
};

struct SphereEffort {
  int restarts = 6;
  std::uint64_t seed = 12345;
  SphereMinControl control{};
};

/// (AB)^k = lambda^(k(k-1)/2) B^(k-1) A^k B for k = 1..k_max; the conclusion
/// margin is the worst normalized residual, negated. Requires a valid
/// certificate (InvalidCertificateError otherwise).
TheoremVerdict verify_power_identity(const Matrix& A, const Matrix& B,
                                     const CommutationCertificate& cert, int k_max,
                                     const Tolerances& tol = {});

/// A hyponormal, B quasi *-paranormal, AB = lambda BA != 0, A invertible
/// => |lambda| = 1.
TheoremVerdict verify_modulus_theorem(const Matrix& A, const Matrix& B,
                                      const Tolerances& tol = {});

/// With B normal, AB = lambda BA extends to the adjoint intertwinings
/// BA* = lambda A*B and AB* = conj(lambda) B*A. Requires a valid certificate.
TheoremVerdict verify_fuglede_putnam(const Matrix& A, const Matrix& B,
                                     const CommutationCertificate& cert,
                                     const Tolerances& tol = {});

/// A quasinormal, B normal, |lambda| = 1 => AB quasinormal.
TheoremVerdict verify_quasinormal_product(const Matrix& A, const Matrix& B,
                                          const Tolerances& tol = {});

/// A binormal, B normal, |lambda| = 1 => AB binormal.
TheoremVerdict verify_binormal_product(const Matrix& A, const Matrix& B,
                                       const Tolerances& tol = {});

/// A k-hyponormal (sphere evidence), B isometry, |lambda| = 1 => AB
/// k-hyponormal; a confirmed verdict additionally requires sigma(AB) != {0}.
TheoremVerdict verify_k_hyponormal_product(const Matrix& A, const Matrix& B, int k,
                                           const Tolerances& tol = {},
                                           const SphereEffort& effort = {});

/// With M1 = minimal constant of A* and M2 of B: |lambda| <= sqrt(M1 M2);
/// mirrored constants of (A, B*) give |lambda| >= 1/sqrt(M1' M2').
TheoremVerdict verify_lambda_bounds(const Matrix& A, const Matrix& B,
                                    const Tolerances& tol = {});

/// A*B and BA* are M1 M2 |lambda|^2 - hyponormal.
TheoremVerdict verify_M_product_theorem(const Matrix& A, const Matrix& B,
                                        const Tolerances& tol = {});

/// Quasi *-paranormal T: ||T^n|| = ||T||^n for n = 3..n_max, T is normaloid,
/// and a quasinilpotent instance must vanish.
TheoremVerdict verify_normaloid_lemma(const Matrix& T, int n_max, const Tolerances& tol = {});

/// Restrictions of quasi *-paranormal operators to invariant subspaces stay
/// quasi *-paranormal. Throws NotOrthonormalError / NotInvariantError.
TheoremVerdict verify_restriction_lemma(const Matrix& T, const Matrix& basis,
                                        const Tolerances& tol = {});

// --- suite --- //

struct SuiteConfig {
  std::vector<int> dims{2, 3, 4, 5, 6, 7, 8};
  int trials = 200;
  std::uint64_t seed = 42;
  Tolerances tol{};
  int k_max = 6;
  SphereEffort sphere{};
};

struct TheoremTally {
  int confirmed = 0;
  int vacuous = 0;
  int violated = 0;
  double premise_hit_rate = 0.0;
  double worst_conclusion_margin = 0.0;
  int worst_trial = -1;
  std::string worst_instance;  // serialized offender (lowest trial on ties)
};

struct SuiteReport {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<int> dims;
  Tolerances tol{};
  std::vector<std::pair<std::string, TheoremTally>> per_theorem;

  bool passed() const;
  const TheoremTally& tally(std::string_view theorem_id) const;
};

const std::vector<std::string>& theorem_ids();

/// Deterministic sweep: constructed premise-satisfying families interleaved
/// with random vacuity probes, every verifier run per trial. Any violated
/// verdict fails the suite.
SuiteReport run_suite(const SuiteConfig& config);

/// Seeded stress search biased toward premise satisfaction: unitary
/// conjugations of constructed pairs, perturbed around the certificate
/// tolerance. Throws UnknownTheoremError for an unknown id.
SuiteReport counterexample_search(const std::string& theorem_id, int trials, std::uint64_t seed,
                                  const Tolerances& tol = {});

}  // namespace oplab

#endif  // OPLAB_THEOREMS_HPP
