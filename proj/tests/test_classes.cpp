#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oplab/classes.hpp"
#include "oplab/matrix_core.hpp"
#include "oplab/pairs.hpp"
#include "chains.hpp"
#include "oracles.hpp"

using namespace oplab;

namespace {

const Tolerances tol{};

Matrix diag2(Complex a, Complex b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// the matrix [[1,0],[1,1]] used across several oracles
Matrix lower_ones() {
  Matrix t(2, 2);
  t << Complex(1, 0), Complex(0, 0), Complex(1, 0), Complex(1, 0);
  return t;
}

// Test-side re-evaluation of the unclamped family quadratic at a vector.
double pointwise_family_violation(const Matrix& P, const Matrix& Q, const Matrix& R,
                                  const Vector& x) {
  const double p = std::real(Complex(x.adjoint() * (P * x)));
  const double q = std::real(Complex(x.adjoint() * (Q * x)));
  const double r = std::real(Complex(x.adjoint() * (R * x)));
  if (r > 1e-300) {
    const double lambda = std::max(q / r, 0.0);
    return -(p - 2.0 * lambda * q + lambda * lambda * r);
  }
  if (q > 1e-300) return std::numeric_limits<double>::infinity();
  return -p;
}

// matrices of each defining inequality, reconstructed for witness checks
struct FamilyTriple {
  Matrix P, Q, R;
};

FamilyTriple family_for(const std::string& class_id, const Matrix& T) {
  const double n = operator_norm(T);
  const Matrix S = n > 0 ? Matrix(T / n) : T;
  const Matrix S2 = S * S;
  const Matrix I = Matrix::Identity(S.rows(), S.cols());
  if (class_id == "paranormal") return {S2.adjoint() * S2, S.adjoint() * S, I};
  if (class_id == "star_paranormal") return {S2.adjoint() * S2, S * S.adjoint(), I};
  const Matrix S3 = S2 * S;
  const Matrix TtT = S.adjoint() * S;
  return {S3.adjoint() * S3, TtT * TtT, TtT};  // quasi_star_paranormal
}

// witness soundness: the recorded vector must reproduce the violation
void check_witness(const ClassEntry& e, const Matrix& T) {
  REQUIRE(e.witness.has_value());
  const Vector& x = e.witness->vector;
  CHECK(std::abs(x.norm() - 1.0) <= tol.eq_tol);

  const double n = operator_norm(T);
  const Matrix S = n > 0 ? Matrix(T / n) : T;
  const Matrix TtT = S.adjoint() * S;
  const Matrix TTt = S * S.adjoint();
  const auto quad = [&x](const Matrix& D) { return std::real(Complex(x.adjoint() * (D * x))); };

  double violation = 0.0;
  if (e.class_id == "positive") {
    violation = -quad(0.5 * (S + S.adjoint()));
  } else if (e.class_id == "hyponormal") {
    violation = -quad(TtT - TTt);
  } else if (e.class_id == "m_hyponormal") {
    if (std::isinf(*e.params.M)) {
      CHECK(quad(TtT) <= tol.psd_tol);  // witness lives in ker(T*T)
      violation = quad(TTt);
    } else {
      violation = -quad(*e.params.M * TtT - TTt);
    }
  } else if (e.class_id == "p_hyponormal") {
    violation = -quad(hermitian_power(TtT, *e.params.p, tol) -
                      hermitian_power(TTt, *e.params.p, tol));
  } else if (e.class_id == "p_quasihyponormal") {
    const Matrix D = hermitian_power(TtT, *e.params.p, tol) -
                     hermitian_power(TTt, *e.params.p, tol);
    violation = -quad(S.adjoint() * D * S);
  } else if (e.class_id == "class_a") {
    const Matrix S2 = S * S;
    violation = -quad(hermitian_power(S2.adjoint() * S2, 0.5, tol) - TtT);
  } else if (e.class_id == "log_hyponormal") {
    Eigen::SelfAdjointEigenSolver<Matrix> es1(TtT), es2(TTt);
    auto logm = [](const Eigen::SelfAdjointEigenSolver<Matrix>& es) {
      RealVector v = es.eigenvalues();
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::log(std::max(v(i), 1e-300));
      return Matrix(es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint());
    };
    violation = -quad(logm(es1) - logm(es2));
  } else if (e.class_id == "k_hyponormal") {
    Matrix Sk = S;
    for (int i = 1; i < *e.params.k; ++i) Sk = Sk * S;
    violation = std::pow((S * x).norm(), *e.params.k) - (Sk * x).norm();
  } else {
    const FamilyTriple f = family_for(e.class_id, T);
    violation = pointwise_family_violation(f.P, f.Q, f.R, x);
  }
  CHECK(violation >= -e.margin - tol.psd_tol);
}

}  // namespace

TEST_CASE("family_psd_min on the three reference families") {
  const Matrix I2 = Matrix::Identity(2, 2);

  // (1 - lambda)^2 I: a perfect square touching zero at lambda = 1
  const FamilyCheckResult perfect = family_psd_min(I2, I2, I2, tol);
  CHECK(perfect.min_margin == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(perfect.argmin_lambda == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(perfect.bracket.first <= perfect.argmin_lambda);
  CHECK(perfect.bracket.second >= perfect.argmin_lambda);

  // -2 lambda + lambda^2 reaches -1 at lambda = 1
  const FamilyCheckResult neg = family_psd_min(Matrix::Zero(2, 2), I2, I2, tol);
  CHECK(neg.min_margin == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(neg.argmin_lambda == doctest::Approx(1.0).epsilon(1e-6));

  // coordinates (2 - lambda)^2 and lambda^2: infimum 0
  const FamilyCheckResult third = family_psd_min(diag2(4, 0), diag2(1, 0), I2, tol);
  // scalar minimization oracle per coordinate over a dense lambda grid
  double oracle_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 400000; ++i) {
    const double lam = 4.0 * i / 400000.0 + 1e-9;
    oracle_min = std::min(oracle_min, std::min((2 - lam) * (2 - lam), lam * lam));
  }
  CHECK(third.min_margin == doctest::Approx(oracle_min).epsilon(1e-5));
  CHECK(std::abs(third.min_margin) <= 1e-8);

  CHECK_THROWS_AS(family_psd_min(diag2(-1, 1), I2, I2, tol), NotPsdInputError);
}

TEST_CASE("sphere_min reference objectives") {
  Matrix d = diag2(0, 1);
  const auto quad_obj = [&d](const Vector& x) {
    return std::real(Complex(x.adjoint() * (d * x))) / x.squaredNorm();
  };
  const SphereMinResult q = sphere_min(quad_obj, 2, 4, 1);
  CHECK(q.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(std::abs(q.argmin(0)) == doctest::Approx(1.0).epsilon(1e-6));

  const Matrix j = oracle::jordan2();
  const auto neg_norm = [&j](const Vector& x) { return -(j * x).squaredNorm(); };
  const SphereMinResult m = sphere_min(neg_norm, 2, 4, 1);
  CHECK(m.value == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(m.argmin(1)) == doctest::Approx(1.0).epsilon(1e-6));

  // paranormal defect of [[1,0],[1,1]] is genuinely negative
  const Matrix t = lower_ones();
  const Matrix t2 = t * t;
  const Matrix P = t2.adjoint() * t2;
  const Matrix Q = t.adjoint() * t;
  const auto defect = [&](const Vector& x) {
    const double p = std::real(Complex(x.adjoint() * (P * x)));
    const double q2 = std::real(Complex(x.adjoint() * (Q * x)));
    return std::sqrt(std::max(p, 0.0)) - q2;  // ||T^2 x|| ||x|| - ||Tx||^2 on the sphere
  };
  const SphereMinResult par = sphere_min(defect, 2, 8, 3);
  CHECK(par.value < -1e-3);
  // dense grid over the 2-sphere parameterization as the oracle
  const double grid = oracle::sphere2_grid_min(defect);
  CHECK(par.value == doctest::Approx(grid).epsilon(1e-5));
  CHECK(par.value <= grid + 1e-9);  // the descent may only undershoot the grid
}

TEST_CASE("classify: Pauli X profile") {
  const ClassReport r = classify(oracle::pauli_x(), tol);
  for (const char* id :
       {"self_adjoint", "isometry", "unitary", "normal", "quasinormal", "binormal", "hyponormal",
        "m_hyponormal", "p_hyponormal", "class_a", "paranormal", "k_hyponormal",
        "star_paranormal", "quasi_star_paranormal", "log_hyponormal", "p_quasihyponormal",
        "normaloid"}) {
    CHECK_MESSAGE(r.is_member(id), id);
  }
  CHECK(r.at("positive").verdict == Verdict::nonmember);  // min eigenvalue -1
  CHECK(r.at("positive").margin == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(r.at("quasinilpotent").verdict == Verdict::nonmember);
  CHECK(r.at("subnormal").verdict == Verdict::inapplicable);
  CHECK(r.at("m_hyponormal").params.M == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("classify: Jordan block profile") {
  const ClassReport r = classify(oracle::jordan2(), tol);

  const auto& hypo = r.at("hyponormal");
  CHECK(hypo.verdict == Verdict::nonmember);
  CHECK(hypo.margin == doctest::Approx(-1.0).epsilon(1e-12));
  check_witness(hypo, oracle::jordan2());

  const auto& quasi = r.at("quasi_star_paranormal");
  CHECK(quasi.verdict == Verdict::nonmember);
  CHECK(quasi.margin == doctest::Approx(-1.0).epsilon(1e-9));
  // the witness is e2: T*T e2 = e2 while T^3 e2 = 0
  CHECK(std::abs(quasi.witness->vector(1)) == doctest::Approx(1.0).epsilon(1e-6));
  check_witness(quasi, oracle::jordan2());

  CHECK(r.is_member("quasinilpotent"));
  CHECK(r.at("normaloid").verdict == Verdict::nonmember);
  CHECK(r.at("normaloid").margin == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(r.is_member("binormal"));  // T*T and TT* are commuting diagonals
  CHECK(r.at("positive").verdict == Verdict::inapplicable);
  CHECK(r.at("log_hyponormal").verdict == Verdict::inapplicable);
  CHECK(std::isinf(*r.at("m_hyponormal").params.M));
  check_witness(r.at("m_hyponormal"), oracle::jordan2());

  for (const char* id : {"self_adjoint", "isometry", "unitary", "normal", "quasinormal",
                         "p_hyponormal", "class_a", "paranormal", "k_hyponormal",
                         "star_paranormal", "p_quasihyponormal"}) {
    CHECK_MESSAGE(r.at(id).verdict == Verdict::nonmember, id);
    if (r.at(id).witness) check_witness(r.at(id), oracle::jordan2());
  }
}

TEST_CASE("classify: positive diagonal profile") {
  const ClassReport r = classify(diag2(1, 2), tol);
  for (const auto& e : r.entries) {
    if (e.class_id == "isometry" || e.class_id == "unitary" || e.class_id == "quasinilpotent") {
      CHECK_MESSAGE(e.verdict == Verdict::nonmember, e.class_id);
    } else if (e.class_id == "subnormal") {
      CHECK(e.verdict == Verdict::inapplicable);
    } else {
      CHECK_MESSAGE(e.verdict == Verdict::member, e.class_id);
    }
  }
  CHECK(*r.at("m_hyponormal").params.M == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("classify: the zero matrix") {
  const ClassReport r = classify(Matrix::Zero(3, 3), tol);
  for (const auto& e : r.entries) {
    if (e.class_id == "isometry" || e.class_id == "unitary") {
      CHECK_MESSAGE(e.verdict == Verdict::nonmember, e.class_id);
    } else if (e.class_id == "subnormal" || e.class_id == "log_hyponormal") {
      CHECK_MESSAGE(e.verdict == Verdict::inapplicable, e.class_id);
    } else {
      CHECK_MESSAGE(e.verdict == Verdict::member, e.class_id);
    }
  }
}

TEST_CASE("minimal_M_constant") {
  CHECK(minimal_M_constant(random_normal(4, 3), tol) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(minimal_M_constant(diag2(1, 2), tol) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isinf(minimal_M_constant(oracle::jordan2(), tol)));

  // 2x2 generalized-eigenvalue oracle: max root of mu^2 - 3 mu + 1
  const double oracle_value = 0.5 * (3.0 + std::sqrt(5.0));
  CHECK(minimal_M_constant(lower_ones(), tol) == doctest::Approx(oracle_value).epsilon(1e-8));

  CHECK(minimal_M_constant(Matrix::Zero(2, 2), tol) == 1.0);
}

TEST_CASE("restrict_to_invariant") {
  // block-diagonal: restriction to the first block
  Matrix t = Matrix::Zero(4, 4);
  t.topLeftCorner(2, 2) = lower_ones();
  t.bottomRightCorner(2, 2) = diag2(5, 7);
  const Matrix v = Matrix::Identity(4, 2);
  CHECK((restrict_to_invariant(t, v, tol) - lower_ones()).norm() <= 1e-14);

  // cyclic 3-shift restricted to its Fourier eigenvector
  Matrix c = Matrix::Zero(3, 3);
  c(0, 2) = c(1, 0) = c(2, 1) = Complex(1, 0);
  Matrix fourier(3, 1);
  fourier << Complex(1, 0), Complex(1, 0), Complex(1, 0);
  fourier /= std::sqrt(3.0);
  const Matrix r = restrict_to_invariant(c, fourier, tol);
  CHECK(r.rows() == 1);
  CHECK(std::abs(r(0, 0) - Complex(1, 0)) <= 1e-12);

  // J2: span(e1) is invariant, span(e2) is not
  const Matrix j = oracle::jordan2();
  const Matrix e1 = Matrix::Identity(2, 1);
  CHECK(restrict_to_invariant(j, e1, tol).norm() == 0.0);
  Matrix e2(2, 1);
  e2 << Complex(0, 0), Complex(1, 0);
  CHECK_THROWS_AS(restrict_to_invariant(j, e2, tol), NotInvariantError);

  Matrix skew(2, 1);
  skew << Complex(1, 0), Complex(1, 0);
  CHECK_THROWS_AS(restrict_to_invariant(j, skew, tol), NotOrthonormalError);
}

namespace {

std::vector<Matrix> seeded_corpus(int dims_from, int dims_to, int per_dim) {
  std::vector<Matrix> out;
  std::uint64_t seed = 100;
  for (int dim = dims_from; dim <= dims_to; ++dim) {
    for (int i = 0; i < per_dim; ++i) {
      switch (i % 5) {
        case 0: out.push_back(random_normal(dim, ++seed)); break;
        case 1: out.push_back(random_unitary(dim, ++seed)); break;
        case 2: out.push_back(jordan_block(dim, Complex(0.3 * (i % 3), 0.2))); break;
        case 3: {
          std::vector<double> w;
          for (int k = 0; k + 1 < dim; ++k) w.push_back(0.25 + k + (i % 4));
          out.push_back(weighted_shift(w));
          break;
        }
        default: out.push_back(random_contraction(dim, ++seed)); break;
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("implication chains hold on a seeded corpus") {
  ClassifyOptions opts;
  opts.k_hyponormal = false;  // the chains do not involve the sphere entry
  for (const Matrix& t : seeded_corpus(2, 5, 10)) {
    const ClassReport r = classify(t, tol, opts);
    const auto broken = chains::violations(r, tol);
    CHECK_MESSAGE(broken.empty(), (broken.empty() ? std::string() : broken.front()));
  }
}

TEST_CASE("finite-dimensional collapse: hyponormal member is normal") {
  ClassifyOptions opts;
  opts.k_hyponormal = false;
  for (const Matrix& t : seeded_corpus(2, 5, 5)) {
    const ClassReport r = classify(t, tol, opts);
    if (r.is_member("hyponormal")) CHECK(r.is_member("normal"));
  }
}

TEST_CASE("unitary invariance of verdicts") {
  for (std::uint64_t seed : {5u, 6u}) {
    for (const Matrix& t :
         {random_contraction(4, seed), Matrix(jordan_block(4, Complex(0.2, 0.1)))}) {
      const Matrix u = random_unitary(4, seed + 50);
      const ClassReport r1 = classify(t, tol);
      const ClassReport r2 = classify(Matrix(u.adjoint() * t * u), tol);
      for (size_t i = 0; i < r1.entries.size(); ++i)
        CHECK_MESSAGE(r1.entries[i].verdict == r2.entries[i].verdict,
                      r1.entries[i].class_id);
    }
  }
}

TEST_CASE("scale covariance of verdicts") {
  const std::vector<Matrix> ts = {lower_ones(), oracle::jordan2(), random_contraction(3, 17),
                                  random_normal(3, 23)};
  for (const Matrix& t : ts) {
    const ClassReport base = classify(t, tol);
    for (double c : {1e-3, 7.0, 1e3}) {
      const ClassReport scaled = classify(Matrix(c * t), tol);
      for (size_t i = 0; i < base.entries.size(); ++i)
        CHECK_MESSAGE(base.entries[i].verdict == scaled.entries[i].verdict,
                      base.entries[i].class_id << " at scale " << c);
    }
  }
}

TEST_CASE("PSD-margin classes gate membership at -psd_tol") {
  for (const Matrix& t : seeded_corpus(2, 4, 5)) {
    const ClassReport r = classify(t, tol);
    for (const auto& e : r.entries) {
      if (e.method != "psd" || e.verdict == Verdict::inapplicable) continue;
      CHECK_MESSAGE((e.margin >= -tol.psd_tol) == (e.verdict == Verdict::member), e.class_id);
    }
  }
}

TEST_CASE("witness soundness on seeded nonmembers") {
  for (const Matrix& t : seeded_corpus(2, 4, 5)) {
    const ClassReport r = classify(t, tol);
    for (const auto& e : r.entries)
      if (e.witness) check_witness(e, t);
  }
}

TEST_CASE("family engine agrees with the sphere falsifier") {
  // full-scale corpus lives in the acceptance suite; a fast slice here
  int checked = 0;
  for (const Matrix& t : seeded_corpus(2, 3, 5)) {
    for (const char* id : {"paranormal", "star_paranormal", "quasi_star_paranormal"}) {
      const FamilyTriple f = family_for(id, t);
      const FamilyCheckResult fam = family_psd_min(f.P, f.Q, f.R, tol);
      const auto objective = [&](const Vector& x) {
        return family_pointwise_value(f.P, f.Q, f.R, fam.bracket.first, fam.bracket.second, x);
      };
      const SphereMinResult sph =
          sphere_min(objective, int(t.rows()), 10, 99, SphereMinControl{400, 1e-6, 1e-11, 0.5});
      CHECK_MESSAGE(std::abs(fam.min_margin - sph.value) <= 10.0 * tol.psd_tol,
                    id << ": family " << fam.min_margin << " vs sphere " << sph.value);
      const bool fam_member = fam.min_margin >= -tol.psd_tol;
      const bool sph_member = sph.value >= -tol.psd_tol;
      CHECK(fam_member == sph_member);
      ++checked;
    }
  }
  CHECK(checked == 30);
}
