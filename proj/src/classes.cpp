#include "oplab/classes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "oplab/matrix_core.hpp"

namespace oplab {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::member: return "member";
    case Verdict::nonmember: return "nonmember";
    case Verdict::inapplicable: return "inapplicable";
  }
  return "?";
}

const ClassEntry& ClassReport::at(std::string_view class_id) const {
  for (const auto& e : entries)
    if (e.class_id == class_id) return e;
  throw Error("ClassReport: no entry for class '" + std::string(class_id) + "'");
}

bool ClassReport::is_member(std::string_view class_id) const {
  return at(class_id).verdict == Verdict::member;
}

// --- family engine --- //

namespace {

double family_margin_at(const Matrix& P, const Matrix& Q, const Matrix& R, double lambda) {
  const Matrix F = P - 2.0 * lambda * Q + lambda * lambda * R;
  Eigen::SelfAdjointEigenSolver<Matrix> es(F, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Golden-section minimization of margin(e^u) on [log(a), log(b)].
double golden_refine(const Matrix& P, const Matrix& Q, const Matrix& R, double a, double b,
                     double* best_lambda) {
  constexpr double kInvPhi = 0.6180339887498949;
  double ua = std::log(a), ub = std::log(b);
  double u1 = ub - kInvPhi * (ub - ua);
  double u2 = ua + kInvPhi * (ub - ua);
  double f1 = family_margin_at(P, Q, R, std::exp(u1));
  double f2 = family_margin_at(P, Q, R, std::exp(u2));
  for (int it = 0; it < 120 && (ub - ua) > 1e-12; ++it) {
    if (f1 <= f2) {
      ub = u2;
      u2 = u1;
      f2 = f1;
      u1 = ub - kInvPhi * (ub - ua);
      f1 = family_margin_at(P, Q, R, std::exp(u1));
    } else {
      ua = u1;
      u1 = u2;
      f1 = f2;
      u2 = ua + kInvPhi * (ub - ua);
      f2 = family_margin_at(P, Q, R, std::exp(u2));
    }
  }
  const double u = f1 <= f2 ? u1 : u2;
  *best_lambda = std::exp(u);
  return std::min(f1, f2);
}

}  // namespace

FamilyCheckResult family_psd_min(const Matrix& P, const Matrix& Q, const Matrix& R,
                                 const Tolerances& tol) {
  const char* names[3] = {"P", "Q", "R"};
  const Matrix* ms[3] = {&P, &Q, &R};
  for (int i = 0; i < 3; ++i) {
    detail::require_hermitian(*ms[i], tol, "family_psd_min");
    if (psd_margin(*ms[i], tol) < -tol.psd_tol)
      throw NotPsdInputError(std::string("family_psd_min: input ") + names[i] + " is not PSD");
  }
  const Matrix Ps = 0.5 * (P + P.adjoint());
  const Matrix Qs = 0.5 * (Q + Q.adjoint());
  const Matrix Rs = 0.5 * (R + R.adjoint());

  const double qn = operator_norm(Qs);
  const double r_floor = std::max(psd_margin(Rs, tol), tol.psd_tol);
  const double cap = 2.0 * (1.0 + qn) / r_floor;
  const double lo = std::min(tol.psd_tol / (2.0 * (1.0 + qn)), 0.5 * cap);

  constexpr int kGrid = 64;
  double lambdas[kGrid];
  double margins[kGrid];
  const double ratio = std::pow(cap / lo, 1.0 / (kGrid - 1));
  for (int i = 0; i < kGrid; ++i) {
    lambdas[i] = lo * std::pow(ratio, i);
    margins[i] = family_margin_at(Ps, Qs, Rs, lambdas[i]);
  }

  // Refine every discrete local minimum; the grid is geometric, so each
  // refinement bracket spans at most two cells.
  double best_margin = std::numeric_limits<double>::infinity();
  double best_lambda = lambdas[0];
  for (int i = 0; i < kGrid; ++i) {
    const bool left_ok = i == 0 || margins[i] <= margins[i - 1];
    const bool right_ok = i == kGrid - 1 || margins[i] <= margins[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double a = lambdas[std::max(i - 1, 0)];
    const double b = lambdas[std::min(i + 1, kGrid - 1)];
    double lam = lambdas[i];
    double val = margins[i];
    if (a < b) {
      double lam_refined;
      const double refined = golden_refine(Ps, Qs, Rs, a, b, &lam_refined);
      if (refined < val) {
        val = refined;
        lam = lam_refined;
      }
    }
    if (val < best_margin) {
      best_margin = val;
      best_lambda = lam;
    }
  }

  FamilyCheckResult result;
  result.bracket = {lo, cap};
  result.argmin_lambda = best_lambda;
  const Matrix F = Ps - 2.0 * best_lambda * Qs + best_lambda * best_lambda * Rs;
  Eigen::SelfAdjointEigenSolver<Matrix> es(F);
  result.min_margin = std::min(best_margin, es.eigenvalues()(0));
  result.argmin_vector = es.eigenvectors().col(0);
  return result;
}

double family_pointwise_value(const Matrix& P, const Matrix& Q, const Matrix& R, double lo,
                              double hi, const Vector& x) {
  const double p = std::real(Complex(x.adjoint() * (P * x)));
  const double q = std::real(Complex(x.adjoint() * (Q * x)));
  const double r = std::real(Complex(x.adjoint() * (R * x)));
  double lambda;
  if (r > 0.0)
    lambda = std::clamp(q / r, lo, hi);
  else
    lambda = q > 0.0 ? hi : lo;
  return p - 2.0 * lambda * q + lambda * lambda * r;
}

// --- sphere minimizer --- //

namespace {

// Reproducible uniform doubles; std distributions are not pinned by the
// standard, the raw mt19937_64 stream is.
double uniform01(std::mt19937_64& gen) {
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return u > 0.0 ? u : 0x1.0p-53;
}

Vector random_unit_vector(std::mt19937_64& gen, int dim) {
  Vector x(dim);
  for (int i = 0; i < dim; ++i) {
    const double u1 = uniform01(gen);
    const double u2 = uniform01(gen);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    x(i) = Complex(rad * std::cos(2.0 * M_PI * u2), rad * std::sin(2.0 * M_PI * u2));
  }
  const double n = x.norm();
  return n > 0.0 ? Vector(x / n) : Vector(Vector::Unit(dim, 0));
}

double real_dot(const Vector& a, const Vector& b) { return std::real(Complex(a.dot(b))); }

struct DescentResult {
  double value;
  Vector point;
};

Vector tangent_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                        double h) {
  const int dim = static_cast<int>(x.size());
  Vector grad(dim), xp(dim);
  for (int j = 0; j < dim; ++j) {
    double parts[2];
    for (int part = 0; part < 2; ++part) {
      const Complex delta = part == 0 ? Complex(h, 0) : Complex(0, h);
      xp = x;
      xp(j) += delta;
      const double fplus = f(xp);
      xp(j) = x(j) - delta;
      const double fminus = f(xp);
      parts[part] = (fplus - fminus) / (2.0 * h);
    }
    grad(j) = Complex(parts[0], parts[1]);
  }
  grad -= real_dot(x, grad) * x;  // project onto the sphere's tangent space
  return grad;
}

// Projected gradient descent with Barzilai-Borwein steps and Armijo
// backtracking; plain steepest descent zigzags too slowly for the margin
// accuracy the cross-validation checks demand.
DescentResult descend(const std::function<double(const Vector&)>& f, Vector x,
                      const SphereMinControl& c) {
  double fx = f(x);
  Vector grad = tangent_gradient(f, x, c.grad_step);
  double step = c.init_step;
  for (int iter = 0; iter < c.max_iters; ++iter) {
    const double gnorm2 = grad.squaredNorm();
    if (std::sqrt(gnorm2) <= c.grad_tol) break;

    bool accepted = false;
    // BB steps can legitimately reach 1/curvature in shallow valleys; the
    // backtracking handles overshoot, so the upper clamp is generous.
    for (double t = std::clamp(step, 1e-12, 1e7); t >= 1e-16; t *= 0.5) {
      Vector y = x - t * grad;
      y /= y.norm();
      const double fy = f(y);
      if (fy <= fx - 1e-4 * t * gnorm2) {
        const Vector displacement = y - x;
        const Vector new_grad = tangent_gradient(f, y, c.grad_step);
        const Vector grad_change = new_grad - grad;
        const double sy = std::abs(real_dot(displacement, grad_change));
        const double yy = grad_change.squaredNorm();
        step = yy > 0.0 && sy > 0.0 ? sy / yy : 2.0 * t;
        x = std::move(y);
        fx = fy;
        grad = new_grad;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return {fx, std::move(x)};
}

}  // namespace

SphereMinResult sphere_min(const std::function<double(const Vector&)>& objective, int dim,
                           int restarts, std::uint64_t seed, const SphereMinControl& control) {
  std::mt19937_64 gen(seed);
  std::vector<Vector> starts;
  starts.reserve(static_cast<size_t>(dim) + 1 + static_cast<size_t>(std::max(restarts, 0)));
  for (int i = 0; i < dim; ++i) starts.push_back(Vector::Unit(dim, i));
  starts.push_back(Vector::Constant(dim, Complex(1.0 / std::sqrt(double(dim)), 0.0)));
  for (int r = 0; r < restarts; ++r) starts.push_back(random_unit_vector(gen, dim));

  SphereMinResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    DescentResult d = descend(objective, s, control);
    if (d.value < best.value) {
      best.value = d.value;
      best.argmin = std::move(d.point);
    }
  }
  return best;
}

// --- per-class predicates --- //

namespace {

Matrix unit_scaled(const Matrix& T) {
  const double n = operator_norm(T);
  return n > 0.0 ? Matrix(T / n) : T;
}

double min_eig(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

double self_adjoint_margin(const Matrix& T) {
  const double scale = operator_norm(T);
  if (scale == 0.0) return 0.0;
  return -(T - T.adjoint()).norm() / scale;
}

double normal_margin(const Matrix& T) {
  const double scale = operator_norm(T);
  if (scale == 0.0) return 0.0;
  return -(T.adjoint() * T - T * T.adjoint()).norm() / (scale * scale);
}

double quasinormal_margin(const Matrix& T) {
  const double scale = operator_norm(T);
  if (scale == 0.0) return 0.0;
  const Matrix TtT = T.adjoint() * T;
  return -(T * TtT - TtT * T).norm() / (scale * scale * scale);
}

double binormal_margin(const Matrix& T) {
  const double scale = operator_norm(T);
  if (scale == 0.0) return 0.0;
  const Matrix TtT = T.adjoint() * T;
  const Matrix TTt = T * T.adjoint();
  return -(TtT * TTt - TTt * TtT).norm() / (scale * scale * scale * scale);
}

double isometry_margin(const Matrix& T) {
  return -(T.adjoint() * T - Matrix::Identity(T.rows(), T.cols())).norm();
}

double hyponormal_margin(const Matrix& T, const Tolerances&) {
  const Matrix S = unit_scaled(T);
  return min_eig(S.adjoint() * S - S * S.adjoint());
}

double p_hyponormal_margin(const Matrix& T, double p, const Tolerances& tol) {
  const Matrix S = unit_scaled(T);
  const Matrix left = hermitian_power(S.adjoint() * S, p, tol);
  const Matrix right = hermitian_power(S * S.adjoint(), p, tol);
  return min_eig(left - right);
}

double p_quasihyponormal_margin(const Matrix& T, double p, const Tolerances& tol) {
  const Matrix S = unit_scaled(T);
  const Matrix diff = hermitian_power(S.adjoint() * S, p, tol) - hermitian_power(S * S.adjoint(), p, tol);
  return min_eig(S.adjoint() * diff * S);
}

double class_a_margin(const Matrix& T, const Tolerances& tol) {
  const Matrix S = unit_scaled(T);
  const Matrix S2 = S * S;
  const Matrix abs_sq = hermitian_power(S2.adjoint() * S2, 0.5, tol);  // |T^2|
  return min_eig(abs_sq - S.adjoint() * S);
}

double m_hyponormal_margin(const Matrix& T, double M, const Tolerances&) {
  const Matrix S = unit_scaled(T);
  return min_eig(M * (S.adjoint() * S) - S * S.adjoint());
}

FamilyCheckResult paranormal_check(const Matrix& T, const Tolerances& tol) {
  const Matrix S = unit_scaled(T);
  const Matrix S2 = S * S;
  return family_psd_min(S2.adjoint() * S2, S.adjoint() * S,
                        Matrix::Identity(S.rows(), S.cols()), tol);
}

FamilyCheckResult star_paranormal_check(const Matrix& T, const Tolerances& tol) {
  const Matrix S = unit_scaled(T);
  const Matrix S2 = S * S;
  return family_psd_min(S2.adjoint() * S2, S * S.adjoint(),
                        Matrix::Identity(S.rows(), S.cols()), tol);
}

FamilyCheckResult quasi_star_paranormal_check(const Matrix& T, const Tolerances& tol) {
  const Matrix S = unit_scaled(T);
  const Matrix S3 = S * S * S;
  const Matrix TtT = S.adjoint() * S;
  return family_psd_min(S3.adjoint() * S3, TtT * TtT, TtT, tol);
}

SphereMinResult k_hyponormal_evidence(const Matrix& T, int k, int restarts, std::uint64_t seed,
                                      const SphereMinControl& control) {
  if (k < 2) throw Error("k_hyponormal_evidence: k must be >= 2");
  const Matrix S = unit_scaled(T);
  Matrix Sk = S;
  for (int i = 1; i < k; ++i) Sk = Sk * S;
  auto objective = [S, Sk, k](const Vector& x) {
    const double xn = x.norm();
    return (Sk * x).norm() * std::pow(xn, k - 1) - std::pow((S * x).norm(), k);
  };
  return sphere_min(objective, static_cast<int>(T.rows()), restarts, seed, control);
}

double minimal_M_constant(const Matrix& T, const Tolerances& tol) {
  const double scale = operator_norm(T);
  if (scale == 0.0) return 1.0;
  const Matrix S = T / scale;
  const Matrix TtT = S.adjoint() * S;
  const Matrix TTt = S * S.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (TtT + TtT.adjoint()));
  const RealVector vals = es.eigenvalues();
  const int n = static_cast<int>(vals.size());

  int rank_start = 0;
  while (rank_start < n && vals(rank_start) <= tol.psd_tol) ++rank_start;
  const int kernel_dim = rank_start;
  const int range_dim = n - rank_start;

  if (kernel_dim > 0) {
    const Matrix W = es.eigenvectors().leftCols(kernel_dim);
    const Matrix kernel_block = W.adjoint() * TTt * W;
    if (operator_norm(kernel_block) > tol.psd_tol)
      return std::numeric_limits<double>::infinity();
  }
  if (range_dim == 0) return 1.0;

  const Matrix V = es.eigenvectors().rightCols(range_dim);
  RealVector inv_sqrt(range_dim);
  for (int i = 0; i < range_dim; ++i) inv_sqrt(i) = 1.0 / std::sqrt(vals(kernel_dim + i));
  const Matrix rayleigh =
      inv_sqrt.asDiagonal() * (V.adjoint() * TTt * V) * inv_sqrt.asDiagonal();
  return std::max(1.0, operator_norm(rayleigh));
}

Matrix restrict_to_invariant(const Matrix& T, const Matrix& basis, const Tolerances& tol) {
  if (basis.rows() != T.rows() || basis.cols() < 1 || basis.cols() > basis.rows())
    throw NotOrthonormalError("restrict_to_invariant: basis shape is incompatible");
  const auto k = basis.cols();
  const double ortho_residual = (basis.adjoint() * basis - Matrix::Identity(k, k)).norm();
  if (ortho_residual > tol.eq_tol * std::sqrt(static_cast<double>(k)))
    throw NotOrthonormalError("restrict_to_invariant: columns are not orthonormal");
  const double scale = operator_norm(T);
  const Matrix TV = T * basis;
  const double invariance_residual = (TV - basis * (basis.adjoint() * TV)).norm();
  if (invariance_residual > tol.eq_tol * std::max(scale, 1e-300))
    throw NotInvariantError("restrict_to_invariant: subspace is not invariant, residual " +
                            std::to_string(invariance_residual));
  return basis.adjoint() * TV;
}

// --- classify --- //

namespace {

struct EntryBuilder {
  std::vector<ClassEntry>& entries;
  const Tolerances& tol;

  ClassEntry& add(std::string id, std::string method) {
    entries.push_back(ClassEntry{});
    ClassEntry& e = entries.back();
    e.class_id = std::move(id);
    e.method = std::move(method);
    return e;
  }
};

// min eigenvalue plus its eigenvector
std::pair<double, Vector> min_eig_pair(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

void finish_psd_entry(ClassEntry& e, const std::pair<double, Vector>& me, double psd_tol) {
  e.margin = me.first;
  if (me.first >= -psd_tol) {
    e.verdict = Verdict::member;
  } else {
    e.verdict = Verdict::nonmember;
    e.witness = Witness{me.second, -me.first};
  }
}

void finish_residual_entry(ClassEntry& e, double margin, double psd_tol) {
  e.margin = margin;
  e.verdict = margin >= -psd_tol ? Verdict::member : Verdict::nonmember;
}

void finish_family_entry(ClassEntry& e, const FamilyCheckResult& fam, double psd_tol) {
  e.margin = fam.min_margin;
  if (fam.min_margin >= -psd_tol) {
    e.verdict = Verdict::member;
  } else {
    e.verdict = Verdict::nonmember;
    e.witness = Witness{fam.argmin_vector, -fam.min_margin};
  }
}

}  // namespace

ClassReport classify(const Matrix& T, const Tolerances& tol, const ClassifyOptions& opts) {
  ClassReport report;
  report.dim = static_cast<int>(T.rows());
  report.op_norm = operator_norm(T);
  EntryBuilder build{report.entries, tol};

  const Matrix S = unit_scaled(T);
  const Matrix St = S.adjoint();
  const Matrix TtT = St * S;
  const Matrix TTt = S * St;
  const Matrix I = Matrix::Identity(S.rows(), S.cols());
  const double herm_residual = detail::hermiticity_residual(S);

  {
    auto& e = build.add("positive", "psd");
    if (herm_residual > tol.eq_tol) {
      e.verdict = Verdict::inapplicable;
      e.margin = -herm_residual;
      e.note = "not self-adjoint";
    } else {
      finish_psd_entry(e, min_eig_pair(S), tol.psd_tol);
    }
  }
  finish_residual_entry(build.add("self_adjoint", "residual"), self_adjoint_margin(S), tol.psd_tol);
  finish_residual_entry(build.add("isometry", "residual"), isometry_margin(S), tol.psd_tol);
  finish_residual_entry(build.add("normal", "residual"), normal_margin(S), tol.psd_tol);
  finish_residual_entry(build.add("unitary", "residual"),
                        std::min(isometry_margin(S), isometry_margin(St)), tol.psd_tol);
  finish_residual_entry(build.add("quasinormal", "residual"), quasinormal_margin(S), tol.psd_tol);
  finish_residual_entry(build.add("binormal", "residual"), binormal_margin(S), tol.psd_tol);
  {
    auto& e = build.add("subnormal", "none");
    e.verdict = Verdict::inapplicable;
    e.note = "normal extensions have no finite-dimensional decision procedure";
  }
  finish_psd_entry(build.add("hyponormal", "psd"), min_eig_pair(TtT - TTt), tol.psd_tol);
  {
    auto& e = build.add("m_hyponormal", "psd");
    const double minimal = opts.M ? *opts.M : minimal_M_constant(S, tol);
    e.params.M = minimal;
    Eigen::SelfAdjointEigenSolver<Matrix> es(TtT);
    const RealVector vals = es.eigenvalues();
    int kernel_dim = 0;
    while (kernel_dim < vals.size() && vals(kernel_dim) <= tol.psd_tol) ++kernel_dim;
    if (std::isinf(minimal) && kernel_dim > 0) {
      // TT* keeps mass on ker(T*T); no finite constant works. The margin is
      // the norm of that kernel block, the witness its top eigen-direction.
      const Matrix W = es.eigenvectors().leftCols(kernel_dim);
      Eigen::SelfAdjointEigenSolver<Matrix> kb(Matrix(W.adjoint() * TTt * W));
      const double worst = kb.eigenvalues()(kernel_dim - 1);
      const Vector witness = W * kb.eigenvectors().col(kernel_dim - 1);
      e.margin = -worst;
      e.verdict = Verdict::nonmember;
      e.witness = Witness{witness, worst};
    } else if (std::isinf(minimal)) {
      // full-rank T*T admits a finite constant no matter what was passed in
      e.margin = 0.0;
      e.verdict = Verdict::member;
    } else {
      finish_psd_entry(e, min_eig_pair(minimal * TtT - TTt), tol.psd_tol);
    }
  }
  {
    auto& e = build.add("p_hyponormal", "psd");
    e.params.p = opts.p;
    const Matrix diff =
        hermitian_power(TtT, opts.p, tol) - hermitian_power(TTt, opts.p, tol);
    finish_psd_entry(e, min_eig_pair(diff), tol.psd_tol);
  }
  {
    auto& e = build.add("class_a", "psd");
    const Matrix S2 = S * S;
    const Matrix abs_sq = hermitian_power(S2.adjoint() * S2, 0.5, tol);
    finish_psd_entry(e, min_eig_pair(abs_sq - TtT), tol.psd_tol);
  }
  {
    auto& e = build.add("paranormal", "family");
    const Matrix S2 = S * S;
    finish_family_entry(e, family_psd_min(S2.adjoint() * S2, TtT, I, tol), tol.psd_tol);
  }
  if (opts.k_hyponormal) {
    auto& e = build.add("k_hyponormal", "sphere");
    e.params.k = opts.k;
    const SphereMinResult res =
        k_hyponormal_evidence(S, opts.k, opts.sphere_restarts, opts.sphere_seed, opts.sphere_control);
    e.margin = res.value;
    if (res.value >= -tol.psd_tol) {
      e.verdict = Verdict::member;
      e.note = "one-sided: evidence of membership, not a certificate";
    } else {
      e.verdict = Verdict::nonmember;
      e.witness = Witness{res.argmin, -res.value};
    }
  }
  {
    auto& e = build.add("star_paranormal", "family");
    const Matrix S2 = S * S;
    finish_family_entry(e, family_psd_min(S2.adjoint() * S2, TTt, I, tol), tol.psd_tol);
  }
  {
    auto& e = build.add("quasi_star_paranormal", "family");
    const Matrix S3 = S * S * S;
    finish_family_entry(e, family_psd_min(S3.adjoint() * S3, TtT * TtT, TtT, tol), tol.psd_tol);
  }
  {
    auto& e = build.add("log_hyponormal", "psd");
    const double smin = sigma_min(S);
    if (smin <= tol.psd_tol) {
      e.verdict = Verdict::inapplicable;
      e.margin = smin - tol.psd_tol;
      e.note = "not invertible within psd_tol";
    } else {
      // Invertibility was gated on sigma_min, so floor the log arguments at
      // the guaranteed smallest eigenvalue instead of re-gating absolutely.
      const double floor_value = 0.5 * smin * smin;
      const Matrix diff = detail::hermitian_log_floored(TtT, floor_value) -
                          detail::hermitian_log_floored(TTt, floor_value);
      finish_psd_entry(e, min_eig_pair(diff), tol.psd_tol);
    }
  }
  {
    auto& e = build.add("p_quasihyponormal", "psd");
    e.params.p = opts.p;
    const Matrix diff =
        hermitian_power(TtT, opts.p, tol) - hermitian_power(TTt, opts.p, tol);
    finish_psd_entry(e, min_eig_pair(St * diff * S), tol.psd_tol);
  }

  std::optional<double> radius;
  if (report.op_norm > 0.0) {
    try {
      radius = spectral_radius(S, tol);
    } catch (const NoConvergenceError&) {
      // classify never throws; the two spectral entries go inapplicable
    }
  } else {
    radius = 0.0;
  }
  {
    auto& e = build.add("normaloid", "spectral");
    if (!radius) {
      e.verdict = Verdict::inapplicable;
      e.note = "spectral radius iteration did not stabilize";
    } else {
      e.margin = report.op_norm > 0.0 ? -std::abs(1.0 - *radius) : 0.0;
      // the radius itself is only accurate to spec_tol
      e.verdict = e.margin >= -10.0 * tol.spec_tol ? Verdict::member : Verdict::nonmember;
    }
  }
  {
    auto& e = build.add("quasinilpotent", "spectral");
    if (!radius) {
      e.verdict = Verdict::inapplicable;
      e.note = "spectral radius iteration did not stabilize";
    } else {
      e.margin = -*radius;
      e.verdict = *radius <= std::max(tol.spec_tol, tol.psd_tol) ? Verdict::member
                                                                 : Verdict::nonmember;
    }
  }

  return report;
}

}  // namespace oplab
