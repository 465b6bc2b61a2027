#include "oplab/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "oplab/io.hpp"
#include "oplab/matrix_core.hpp"

namespace oplab {

std::string_view to_string(TheoremStatus s) {
  switch (s) {
    case TheoremStatus::confirmed: return "confirmed";
    case TheoremStatus::vacuous: return "vacuous";
    case TheoremStatus::violated: return "violated";
  }
  return "?";
}

namespace {

using PremiseList = std::vector<std::pair<std::string, double>>;

TheoremStatus resolve_status(const PremiseList& premises, double conclusion,
                             const Tolerances& tol) {
  for (const auto& [name, margin] : premises)
    if (margin < -tol.psd_tol) return TheoremStatus::vacuous;
  if (conclusion < -tol.margin_gate * tol.psd_tol) return TheoremStatus::violated;
  return TheoremStatus::confirmed;
}

// Certificate validity as a premise margin: 1 at zero residual, 0 at the
// eq_tol gate, negative beyond; -1 for a degenerate pair.
double certificate_margin(const CommutationCertificate& cert, const Tolerances& tol) {
  if (cert.degenerate) return -1.0;
  return (tol.eq_tol - cert.residual) / tol.eq_tol;
}

double ab_nonzero_margin(const CommutationCertificate& cert) {
  return cert.ab_nonzero ? 1.0 : -1.0;
}

double unimodular_margin(const CommutationCertificate& cert) {
  return -std::abs(cert.modulus() - 1.0);
}

Matrix unit_scaled(const Matrix& T) {
  const double n = operator_norm(T);
  return n > 0.0 ? Matrix(T / n) : T;
}

}  // namespace

TheoremVerdict verify_power_identity(const Matrix& A, const Matrix& B,
                                     const CommutationCertificate& cert, int k_max,
                                     const Tolerances& tol) {
  if (!cert.valid(tol))
    throw InvalidCertificateError("verify_power_identity: certificate is not valid");
  if (k_max < 1) throw Error("verify_power_identity: k_max must be >= 1");

  TheoremVerdict v;
  v.theorem_id = "power_identity";
  v.inputs_digest = digest_matrices({&A, &B});
  v.premise_margins.emplace_back("certificate_valid", certificate_margin(cert, tol));

  const double na = operator_norm(A);
  const double nb = operator_norm(B);
  const double sqrt_dim = std::sqrt(double(A.rows()));
  const Matrix AB = A * B;

  double worst = 0.0;
  Matrix ab_pow = AB;                                        // (AB)^k
  Matrix a_pow = A;                                          // A^k
  Matrix b_pow = Matrix::Identity(B.rows(), B.cols());       // B^(k-1)
  Complex lambda_pow(1.0, 0.0);                              // lambda^(k(k-1)/2)
  double scale_pow = na * nb;                                // ||A||^k ||B||^k
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) {
      ab_pow = ab_pow * AB;
      a_pow = a_pow * A;
      b_pow = b_pow * B;
      for (int i = 0; i < k - 1; ++i) lambda_pow *= cert.lambda;  // exponent grows by k-1
      scale_pow *= na * nb;
    }
    const Matrix rhs = lambda_pow * (b_pow * a_pow * B);
    const double denom = scale_pow > 0.0 ? scale_pow * sqrt_dim : 1.0;
    const double residual = (ab_pow - rhs).norm() / denom;
    worst = std::max(worst, residual);
    v.notes += (k > 1 ? " " : "") + std::string("k=") + std::to_string(k) + ":" + fmt17(residual);
  }
  v.conclusion_margin = -worst;
  v.status = resolve_status(v.premise_margins, v.conclusion_margin, tol);
  return v;
}

TheoremVerdict verify_modulus_theorem(const Matrix& A, const Matrix& B, const Tolerances& tol) {
  TheoremVerdict v;
  v.theorem_id = "modulus";
  v.inputs_digest = digest_matrices({&A, &B});
  const CommutationCertificate cert = certify_pair(A, B, tol);

  const double opn_a = operator_norm(A);
  const double inv_margin = (opn_a > 0.0 ? sigma_min(A) / opn_a : 0.0) - 2.0 * tol.psd_tol;
  v.premise_margins.emplace_back("A_hyponormal", hyponormal_margin(A, tol));
  v.premise_margins.emplace_back("B_quasi_star_paranormal",
                                 quasi_star_paranormal_check(B, tol).min_margin);
  v.premise_margins.emplace_back("certificate_valid", certificate_margin(cert, tol));
  v.premise_margins.emplace_back("ab_nonzero", ab_nonzero_margin(cert));
  v.premise_margins.emplace_back("A_invertible", inv_margin);

  v.conclusion_margin = -std::abs(cert.modulus() - 1.0);
  v.notes = "lambda_modulus=" + fmt17(cert.modulus());
  v.status = resolve_status(v.premise_margins, v.conclusion_margin, tol);
  return v;
}

TheoremVerdict verify_fuglede_putnam(const Matrix& A, const Matrix& B,
                                     const CommutationCertificate& cert, const Tolerances& tol) {
  if (!cert.valid(tol))
    throw InvalidCertificateError("verify_fuglede_putnam: certificate is not valid");
  TheoremVerdict v;
  v.theorem_id = "fuglede_putnam";
  v.inputs_digest = digest_matrices({&A, &B});
  v.premise_margins.emplace_back("B_normal", normal_margin(B));
  v.premise_margins.emplace_back("certificate_valid", certificate_margin(cert, tol));

  const double scale = operator_norm(A) * operator_norm(B) * std::sqrt(double(A.rows()));
  if (scale > 0.0) {
    const double res1 = (B * A.adjoint() - cert.lambda * (A.adjoint() * B)).norm() / scale;
    const double res2 =
        (A * B.adjoint() - std::conj(cert.lambda) * (B.adjoint() * A)).norm() / scale;
    v.conclusion_margin = -std::max(res1, res2);
    v.notes = "residuals=" + fmt17(res1) + "," + fmt17(res2);
  }
  v.status = resolve_status(v.premise_margins, v.conclusion_margin, tol);
  return v;
}

namespace {

TheoremVerdict product_commutation_verdict(const char* id, const Matrix& A, const Matrix& B,
                                           double (*premise_margin)(const Matrix&),
                                           const char* premise_name,
                                           double (*conclusion_margin)(const Matrix&),
                                           const Tolerances& tol) {
  TheoremVerdict v;
  v.theorem_id = id;
  v.inputs_digest = digest_matrices({&A, &B});
  const CommutationCertificate cert = certify_pair(A, B, tol);
  v.premise_margins.emplace_back(premise_name, premise_margin(A));
  v.premise_margins.emplace_back("B_normal", normal_margin(B));
  v.premise_margins.emplace_back("certificate_valid", certificate_margin(cert, tol));
  v.premise_margins.emplace_back("ab_nonzero", ab_nonzero_margin(cert));
  v.premise_margins.emplace_back("unimodular_lambda", unimodular_margin(cert));
  v.conclusion_margin = conclusion_margin(A * B);
  v.status = resolve_status(v.premise_margins, v.conclusion_margin, tol);
  return v;
}

}  // namespace

TheoremVerdict verify_quasinormal_product(const Matrix& A, const Matrix& B,
                                          const Tolerances& tol) {
  return product_commutation_verdict("quasinormal_product", A, B, &quasinormal_margin,
                                     "A_quasinormal", &quasinormal_margin, tol);
}

TheoremVerdict verify_binormal_product(const Matrix& A, const Matrix& B, const Tolerances& tol) {
  return product_commutation_verdict("binormal_product", A, B, &binormal_margin, "A_binormal",
                                     &binormal_margin, tol);
}

TheoremVerdict verify_k_hyponormal_product(const Matrix& A, const Matrix& B, int k,
                                           const Tolerances& tol, const SphereEffort& effort) {
  TheoremVerdict v;
  v.theorem_id = "k_hyponormal_product";
  v.inputs_digest = digest_matrices({&A, &B});
  const CommutationCertificate cert = certify_pair(A, B, tol);
  v.premise_margins.emplace_back(
      "A_k_hyponormal",
      k_hyponormal_evidence(A, k, effort.restarts, effort.seed, effort.control).value);
  v.premise_margins.emplace_back("B_isometry", isometry_margin(B));
  v.premise_margins.emplace_back("certificate_valid", certificate_margin(cert, tol));
  v.premise_margins.emplace_back("ab_nonzero", ab_nonzero_margin(cert));
  v.premise_margins.emplace_back("unimodular_lambda", unimodular_margin(cert));

  const Matrix AB = A * B;
  v.conclusion_margin =
      k_hyponormal_evidence(AB, k, effort.restarts, effort.seed, effort.control).value;
  v.notes = "k=" + std::to_string(k) + " one-sided sphere evidence";
  v.status = resolve_status(v.premise_margins, v.conclusion_margin, tol);

  if (v.status == TheoremStatus::confirmed && operator_norm(AB) > 0.0) {
    // the equivalent statement sigma(AB) != {0}
    const double radius = spectral_radius(unit_scaled(AB), tol);
    v.notes += " r(AB)/||AB||=" + fmt17(radius);
    if (radius <= tol.psd_tol) {
      v.status = TheoremStatus::violated;
      v.notes += " spectral radius vanished under held premises";
    }
  }
  return v;
}

TheoremVerdict verify_lambda_bounds(const Matrix& A, const Matrix& B, const Tolerances& tol) {
  TheoremVerdict v;
  v.theorem_id = "lambda_bounds";
  v.inputs_digest = digest_matrices({&A, &B});
  const CommutationCertificate cert = certify_pair(A, B, tol);

  const double m1 = minimal_M_constant(A.adjoint(), tol);
  const double m2 = minimal_M_constant(B, tol);
  const double m1_mirror = minimal_M_constant(A, tol);
  const double m2_mirror = minimal_M_constant(B.adjoint(), tol);

  const auto finite_margin = [](double m) { return std::isfinite(m) ? 1.0 : -1.0; };
  v.premise_margins.emplace_back("M1_finite", finite_margin(m1));
  v.premise_margins.emplace_back("M2_finite", finite_margin(m2));
  v.premise_margins.emplace_back("M1_mirror_finite", finite_margin(m1_mirror));
  v.premise_margins.emplace_back("M2_mirror_finite", finite_margin(m2_mirror));
  v.premise_margins.emplace_back("certificate_valid", certificate_margin(cert, tol));
  v.premise_margins.emplace_back("ab_nonzero", ab_nonzero_margin(cert));

  const double mod = cert.modulus();
  const double upper = std::sqrt(m1 * m2) - mod;                   // |lambda| <= sqrt(M1 M2)
  const double lower = mod - 1.0 / std::sqrt(m1_mirror * m2_mirror);
  v.conclusion_margin = std::min(upper, lower);
  v.notes = "M1=" + fmt17(m1) + " M2=" + fmt17(m2) + " M1'=" + fmt17(m1_mirror) +
            " M2'=" + fmt17(m2_mirror) + " |lambda|=" + fmt17(mod);
  const double c_gate = tol.psd_tol;
  if (std::isfinite(m1) && std::isfinite(m2) && std::isfinite(m1_mirror) &&
      std::isfinite(m2_mirror) && std::abs(m1 - 1.0) <= c_gate && std::abs(m2 - 1.0) <= c_gate &&
      std::abs(m1_mirror - 1.0) <= c_gate && std::abs(m2_mirror - 1.0) <= c_gate)
    v.notes += " corollary: all constants 1, bounds force |lambda| = 1";
  v.status = resolve_status(v.premise_margins, v.conclusion_margin, tol);
  return v;
}

TheoremVerdict verify_M_product_theorem(const Matrix& A, const Matrix& B, const Tolerances& tol) {
  TheoremVerdict v;
  v.theorem_id = "m_product";
  v.inputs_digest = digest_matrices({&A, &B});
  const CommutationCertificate cert = certify_pair(A, B, tol);

  const double m1 = minimal_M_constant(A.adjoint(), tol);
  const double m2 = minimal_M_constant(B, tol);
  const auto finite_margin = [](double m) { return std::isfinite(m) ? 1.0 : -1.0; };
  v.premise_margins.emplace_back("M1_finite", finite_margin(m1));
  v.premise_margins.emplace_back("M2_finite", finite_margin(m2));
  v.premise_margins.emplace_back("certificate_valid", certificate_margin(cert, tol));
  v.premise_margins.emplace_back("ab_nonzero", ab_nonzero_margin(cert));

  const double bound = m1 * m2 * cert.modulus() * cert.modulus();
  if (std::isfinite(bound)) {
    double worst = std::numeric_limits<double>::infinity();
    const Matrix products[2] = {Matrix(A.adjoint() * B), Matrix(B * A.adjoint())};
    for (const Matrix& P : products) {
      if (operator_norm(P) == 0.0) {
        worst = std::min(worst, 0.0);  // the zero operator is M-hyponormal
        continue;
      }
      const Matrix S = unit_scaled(P);
      const Matrix diff = bound * (S.adjoint() * S) - S * S.adjoint();
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()),
                                               Eigen::EigenvaluesOnly);
      worst = std::min(worst, es.eigenvalues()(0));
    }
    v.conclusion_margin = worst;
  }
  v.notes = "bound=" + fmt17(bound);
  v.status = resolve_status(v.premise_margins, v.conclusion_margin, tol);
  return v;
}

TheoremVerdict verify_normaloid_lemma(const Matrix& T, int n_max, const Tolerances& tol) {
  if (n_max < 3) throw Error("verify_normaloid_lemma: n_max must be >= 3");
  TheoremVerdict v;
  v.theorem_id = "normaloid";
  v.inputs_digest = digest_matrices({&T});
  v.premise_margins.emplace_back("T_quasi_star_paranormal",
                                 quasi_star_paranormal_check(T, tol).min_margin);

  const double opn = operator_norm(T);
  if (opn == 0.0) {
    v.conclusion_margin = 0.0;
    v.notes = "T = 0, lemma trivially satisfied";
    v.status = resolve_status(v.premise_margins, v.conclusion_margin, tol);
    return v;
  }
  const Matrix S = T / opn;

  // (a) ||T^n|| = ||T||^n for n = 3..n_max within relative eq_tol * n
  double power_margin = std::numeric_limits<double>::infinity();
  Matrix power = S * S;
  for (int n = 3; n <= n_max; ++n) {
    power = power * S;
    power_margin = std::min(power_margin, tol.eq_tol * n - std::abs(operator_norm(power) - 1.0));
  }
  // (b) normaloid; the radius carries spec_tol error of its own
  const double radius = spectral_radius(S, tol);
  const double normaloid_margin = 10.0 * tol.spec_tol - std::abs(radius - 1.0);
  // (c) a quasinilpotent instance must be the zero operator
  double vanish_margin = 0.0;
  if (radius <= tol.spec_tol) vanish_margin = 10.0 * tol.spec_tol - opn;

  v.conclusion_margin = std::min({power_margin, normaloid_margin, vanish_margin});
  v.notes = "r=" + fmt17(radius * opn) + " norm=" + fmt17(opn);
  v.status = resolve_status(v.premise_margins, v.conclusion_margin, tol);
  return v;
}

TheoremVerdict verify_restriction_lemma(const Matrix& T, const Matrix& basis,
                                        const Tolerances& tol) {
  const Matrix restricted = restrict_to_invariant(T, basis, tol);
  TheoremVerdict v;
  v.theorem_id = "restriction";
  v.inputs_digest = digest_matrices({&T, &basis});
  v.premise_margins.emplace_back("T_quasi_star_paranormal",
                                 quasi_star_paranormal_check(T, tol).min_margin);
  v.conclusion_margin = quasi_star_paranormal_check(restricted, tol).min_margin;
  v.notes = "restricted_dim=" + std::to_string(restricted.rows());
  v.status = resolve_status(v.premise_margins, v.conclusion_margin, tol);
  return v;
}

// --- suite --- //

bool SuiteReport::passed() const {
  for (const auto& [id, tally] : per_theorem)
    if (tally.violated > 0) return false;
  return true;
}

const TheoremTally& SuiteReport::tally(std::string_view theorem_id) const {
  for (const auto& [id, t] : per_theorem)
    if (id == theorem_id) return t;
  throw UnknownTheoremError("SuiteReport: no tally for '" + std::string(theorem_id) + "'");
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {
      "power_identity",   "modulus",      "fuglede_putnam", "quasinormal_product",
      "binormal_product", "k_hyponormal_product", "lambda_bounds", "m_product",
      "normaloid",        "restriction"};
  return ids;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed ^ (salt + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

struct SuiteInstance {
  Pair pair;                 // for the pair theorems
  Matrix single;             // for the normaloid lemma
  Matrix restriction_op;     // block-diagonal or triangular operator
  Matrix restriction_basis;  // invariant columns
  bool constructed = true;   // false for the random vacuity probes
};

Complex unit_phase(std::mt19937_64& gen) {
  const double angle =
      2.0 * M_PI * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
  return Complex(std::cos(angle), std::sin(angle));
}

// One deterministic instance per (config seed, trial). Constructed kinds
// 0..3 guarantee the premises of every pair theorem; kind 4 is the random
// probe that measures vacuity rates.
SuiteInstance make_suite_instance(std::uint64_t seed, int trial, int dim, int kind,
                                  const Tolerances& tol) {
  SuiteInstance inst;
  const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(trial));
  std::mt19937_64 gen(s);

  switch (kind) {
    case 0:
      inst.pair = clock_shift_pair(dim, tol);
      break;
    case 1: {
      // scale A freely, B by a phase so it stays an isometry
      const double mag = 0.25 + 3.75 * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
      const Complex alpha = mag * unit_phase(gen);
      inst.pair = scaled_pair(clock_shift_pair(dim, tol), alpha, unit_phase(gen), tol);
      break;
    }
    case 2: {
      const Pair base = clock_shift_pair(dim, tol);
      const Matrix U = random_unitary(dim, mix_seed(s, 1));
      Pair rotated{U.adjoint() * base.a * U, U.adjoint() * base.b * U, {}};
      rotated.certificate = certify_pair(rotated.a, rotated.b, tol);
      inst.pair = std::move(rotated);
      break;
    }
    case 3: {
      PairRecipe recipe;
      recipe.family = PairFamily::direct_sum;
      recipe.components = {dim, dim};
      inst.pair = make_instance(recipe, tol);
      break;
    }
    default: {  // random probe
      inst.pair = Pair{random_ginibre(dim, mix_seed(s, 2)), random_ginibre(dim, mix_seed(s, 3)), {}};
      inst.pair.certificate = certify_pair(inst.pair.a, inst.pair.b, tol);
      inst.constructed = false;
      break;
    }
  }

  if (inst.constructed) {
    // premise-satisfying singles: alternate the unitary and the diagonal leg
    inst.single = trial % 2 == 0 ? inst.pair.b : inst.pair.a;
    // invariant-subspace instance: a direct sum of rotated positive diagonals
    const int half = std::max(dim / 2, 1);
    auto rotated_diagonal = [&](std::uint64_t salt) {
      std::mt19937_64 g2(mix_seed(s, salt));
      Vector d(half);
      for (int i = 0; i < half; ++i)
        d(i) = Complex(0.25 + 2.0 * (static_cast<double>(g2() >> 11) * 0x1.0p-53), 0.0);
      const Matrix U = random_unitary(half, mix_seed(s, salt + 7));
      return Matrix(U.adjoint() * d.asDiagonal().toDenseMatrix() * U);
    };
    const Matrix X1 = rotated_diagonal(11);
    const Matrix X2 = rotated_diagonal(13);
    Matrix block = Matrix::Zero(2 * half, 2 * half);
    block.topLeftCorner(half, half) = X1;
    block.bottomRightCorner(half, half) = X2;
    inst.restriction_op = block;
    inst.restriction_basis = Matrix::Identity(2 * half, half);
  } else {
    inst.single = random_contraction(dim, mix_seed(s, 4));
    // triangular, hence invariant under the leading coordinates
    inst.restriction_op = jordan_block(dim, Complex(0.0, 0.0));
    inst.restriction_basis = Matrix::Identity(dim, std::max(dim / 2, 1));
  }
  return inst;
}

struct TallyAccumulator {
  TheoremTally tally;
  bool any = false;

  void record(const TheoremVerdict& v, int trial, const std::string& instance_json) {
    switch (v.status) {
      case TheoremStatus::confirmed: ++tally.confirmed; break;
      case TheoremStatus::vacuous: ++tally.vacuous; break;
      case TheoremStatus::violated: ++tally.violated; break;
    }
    if (v.status != TheoremStatus::vacuous &&
        (!any || v.conclusion_margin < tally.worst_conclusion_margin)) {
      any = true;
      tally.worst_conclusion_margin = v.conclusion_margin;
      tally.worst_trial = trial;
      tally.worst_instance = instance_json;
    }
  }

  void record_vacuous(int) { ++tally.vacuous; }

  TheoremTally finish(int trials) {
    if (trials > 0)
      tally.premise_hit_rate = double(tally.confirmed + tally.violated) / double(trials);
    return tally;
  }
};

std::string pair_instance_json(const Pair& p) {
  return "{\"A\":" + matrix_to_json(p.a) + ",\"B\":" + matrix_to_json(p.b) + "}";
}

std::string single_instance_json(const Matrix& t) {
  return "{\"T\":" + matrix_to_json(t) + "}";
}

std::string restriction_instance_json(const Matrix& t, const Matrix& basis) {
  return "{\"T\":" + matrix_to_json(t) + ",\"basis\":" + basis_to_json(basis) + "}";
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& config) {
  if (config.trials < 1) throw Error("run_suite: trials must be >= 1");
  SuiteReport report;
  report.seed = config.seed;
  report.trials = config.trials;
  report.dims = config.dims;
  report.tol = config.tol;

  const auto& ids = theorem_ids();
  std::vector<TallyAccumulator> acc(ids.size());
  const auto index_of = [&](std::string_view id) {
    for (size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return i;
    throw UnknownTheoremError("run_suite: bad id");
  };

  if (!config.dims.empty()) {
    for (int trial = 0; trial < config.trials; ++trial) {
      const int dim = config.dims[size_t(trial) % config.dims.size()];
      const SuiteInstance inst =
          make_suite_instance(config.seed, trial, dim, trial % 5, config.tol);
      const std::string pair_json = pair_instance_json(inst.pair);
      const auto& cert = inst.pair.certificate;

      // the two certificate-gated verifiers
      if (cert.valid(config.tol)) {
        acc[index_of("power_identity")].record(
            verify_power_identity(inst.pair.a, inst.pair.b, cert, config.k_max, config.tol),
            trial, pair_json);
        acc[index_of("fuglede_putnam")].record(
            verify_fuglede_putnam(inst.pair.a, inst.pair.b, cert, config.tol), trial, pair_json);
      } else {
        acc[index_of("power_identity")].record_vacuous(trial);
        acc[index_of("fuglede_putnam")].record_vacuous(trial);
      }

      acc[index_of("modulus")].record(
          verify_modulus_theorem(inst.pair.a, inst.pair.b, config.tol), trial, pair_json);
      acc[index_of("quasinormal_product")].record(
          verify_quasinormal_product(inst.pair.a, inst.pair.b, config.tol), trial, pair_json);
      acc[index_of("binormal_product")].record(
          verify_binormal_product(inst.pair.a, inst.pair.b, config.tol), trial, pair_json);
      acc[index_of("k_hyponormal_product")].record(
          verify_k_hyponormal_product(inst.pair.a, inst.pair.b, 2 + trial % 2, config.tol,
                                      config.sphere),
          trial, pair_json);
      acc[index_of("lambda_bounds")].record(
          verify_lambda_bounds(inst.pair.a, inst.pair.b, config.tol), trial, pair_json);
      acc[index_of("m_product")].record(
          verify_M_product_theorem(inst.pair.a, inst.pair.b, config.tol), trial, pair_json);
      acc[index_of("normaloid")].record(verify_normaloid_lemma(inst.single, 6, config.tol), trial,
                                        single_instance_json(inst.single));
      acc[index_of("restriction")].record(
          verify_restriction_lemma(inst.restriction_op, inst.restriction_basis, config.tol),
          trial, restriction_instance_json(inst.restriction_op, inst.restriction_basis));
    }
  }

  for (size_t i = 0; i < ids.size(); ++i)
    report.per_theorem.emplace_back(ids[i],
                                    acc[i].finish(config.dims.empty() ? 0 : config.trials));
  return report;
}

SuiteReport counterexample_search(const std::string& theorem_id, int trials, std::uint64_t seed,
                                  const Tolerances& tol) {
  const auto& ids = theorem_ids();
  if (std::find(ids.begin(), ids.end(), theorem_id) == ids.end())
    throw UnknownTheoremError("counterexample_search: unknown theorem '" + theorem_id + "'");
  if (trials < 1) throw Error("counterexample_search: trials must be >= 1");

  SuiteReport report;
  report.seed = seed;
  report.trials = trials;
  report.dims = {2, 3, 4, 5, 6, 7, 8};
  report.tol = tol;

  TallyAccumulator acc;
  for (int trial = 0; trial < trials; ++trial) {
    const int dim = report.dims[size_t(trial) % report.dims.size()];
    const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(trial) * 2654435761ull);

    // premise-biased construction, perturbed around the certificate gate;
    // every fourth trial is a random probe
    const int kind = trial % 4 == 3 ? 4 : trial % 4;
    SuiteInstance inst = make_suite_instance(seed, trial, dim, kind, tol);
    const double delta_steps[4] = {0.0, 0.02, 0.2, 2.0};
    const double delta = delta_steps[trial % 4] * tol.eq_tol;
    if (delta > 0.0) {
      const Matrix Ea = random_ginibre(int(inst.pair.a.rows()), mix_seed(s, 21));
      const Matrix Eb = random_ginibre(int(inst.pair.b.rows()), mix_seed(s, 22));
      inst.pair.a += (delta * operator_norm(inst.pair.a) / std::max(operator_norm(Ea), 1e-300)) * Ea;
      inst.pair.b += (delta * operator_norm(inst.pair.b) / std::max(operator_norm(Eb), 1e-300)) * Eb;
      inst.pair.certificate = certify_pair(inst.pair.a, inst.pair.b, tol);
      inst.single = trial % 2 == 0 ? inst.pair.b : inst.pair.a;
      // restriction instances are perturbed block-wise so invariance is exact
      const auto half = inst.restriction_basis.cols();
      const Matrix Eblock = random_ginibre(int(half), mix_seed(s, 23));
      const double block_scale =
          delta * operator_norm(inst.restriction_op) / std::max(operator_norm(Eblock), 1e-300);
      inst.restriction_op.topLeftCorner(half, half) += block_scale * Eblock;
    }

    const std::string pair_json = pair_instance_json(inst.pair);
    const auto& cert = inst.pair.certificate;
    if (theorem_id == "power_identity" || theorem_id == "fuglede_putnam") {
      if (!cert.valid(tol)) {
        acc.record_vacuous(trial);
        continue;
      }
      acc.record(theorem_id == "power_identity"
                     ? verify_power_identity(inst.pair.a, inst.pair.b, cert, 6, tol)
                     : verify_fuglede_putnam(inst.pair.a, inst.pair.b, cert, tol),
                 trial, pair_json);
    } else if (theorem_id == "modulus") {
      acc.record(verify_modulus_theorem(inst.pair.a, inst.pair.b, tol), trial, pair_json);
    } else if (theorem_id == "quasinormal_product") {
      acc.record(verify_quasinormal_product(inst.pair.a, inst.pair.b, tol), trial, pair_json);
    } else if (theorem_id == "binormal_product") {
      acc.record(verify_binormal_product(inst.pair.a, inst.pair.b, tol), trial, pair_json);
    } else if (theorem_id == "k_hyponormal_product") {
      acc.record(verify_k_hyponormal_product(inst.pair.a, inst.pair.b, 2 + trial % 2, tol),
                 trial, pair_json);
    } else if (theorem_id == "lambda_bounds") {
      acc.record(verify_lambda_bounds(inst.pair.a, inst.pair.b, tol), trial, pair_json);
    } else if (theorem_id == "m_product") {
      acc.record(verify_M_product_theorem(inst.pair.a, inst.pair.b, tol), trial, pair_json);
    } else if (theorem_id == "normaloid") {
      acc.record(verify_normaloid_lemma(inst.single, 6, tol), trial,
                 single_instance_json(inst.single));
    } else {  // restriction
      acc.record(verify_restriction_lemma(inst.restriction_op, inst.restriction_basis, tol),
                 trial, restriction_instance_json(inst.restriction_op, inst.restriction_basis));
    }
  }

  for (const auto& id : ids)
    report.per_theorem.emplace_back(id, id == theorem_id ? acc.finish(trials) : TheoremTally{});
  return report;
}

}  // namespace oplab
