#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "dlnlda/objective.hpp"
#include "dlnlda/oracle.hpp"
#include "dlnlda/sampling.hpp"

using namespace dlnlda;

namespace {

// Smallest root of det(S_w - lambda S_b) = 0 for 2x2 matrices, written as
// alpha l^2 + beta l + gamma = 0 and solved without cancellation.
double closed_form_lambda_min(const ScatterPair& p) {
  const Matrix& a = p.s_w();
  const Matrix& b = p.s_b();
  const double alpha = b(0, 0) * b(1, 1) - b(0, 1) * b(0, 1);
  const double beta = -(a(0, 0) * b(1, 1) + a(1, 1) * b(0, 0) - 2.0 * a(0, 1) * b(0, 1));
  const double gamma = a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1);
  const double disc = std::sqrt(beta * beta - 4.0 * alpha * gamma);
  const double q = -0.5 * (beta + (beta >= 0.0 ? disc : -disc));
  return std::min(q / alpha, gamma / q);
}

}  // namespace

TEST_CASE("fd_gradient on known functions") {
  Vector w(2);
  w << 1.0, 2.0;
  const Vector zero = oracle::fd_gradient([](const Vector&) { return 4.2; }, w, 1e-6);
  CHECK(zero.norm() == 0.0);

  const Vector g = oracle::fd_gradient([](const Vector& x) { return x.dot(x); }, w, 1e-6);
  CHECK(std::abs(g(0) - 2.0) <= 1e-8);
  CHECK(std::abs(g(1) - 4.0) <= 1e-8);

  CHECK_THROWS_AS(oracle::fd_gradient([](const Vector& x) { return std::log(x(0)); }, Vector::Zero(1), 1e-6),
                  oracle::NonFiniteEvaluation);
  CHECK_THROWS_AS(oracle::fd_gradient([](const Vector&) { return 0.0; }, w, 0.0), std::invalid_argument);
}

TEST_CASE("fd_gradient of the loss agrees with the analytic gradient") {
  const ScatterPair pair = synthesize_scatter(5, 8086, {0.4, 0.6});
  Xoshiro256 rng(2);
  for (int i = 0; i < 20; ++i) {
    const Vector w = random_vector(rng, 5, -1.0, 1.0);
    const Vector fd = oracle::fd_gradient([&](const Vector& x) { return rayleigh_loss(EffectiveWeights(x), pair); }, w, 1e-6);
    const Vector analytic = rayleigh_gradient(EffectiveWeights(w), pair);
    CHECK((fd - analytic).norm() <= 1e-6 * analytic.norm());
    CHECK(std::abs(w.dot(fd)) <= 1e-4 * w.norm() * fd.norm());
  }
}

TEST_CASE("cholesky_lower") {
  Matrix m(3, 3);
  m << 4, 2, 2, 2, 5, 3, 2, 3, 6;
  const Matrix r = oracle::cholesky_lower(m);
  CHECK((r * r.transpose() - m).norm() <= 1e-14);
  CHECK(r(0, 1) == 0.0);
  CHECK(r(0, 0) == 2.0);

  Matrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(oracle::cholesky_lower(indefinite), std::domain_error);
}

TEST_CASE("jacobi_eigen diagonalizes symmetric matrices") {
  Matrix m(3, 3);
  m << 2, -1, 0, -1, 2, -1, 0, -1, 2;  // eigenvalues 2 - sqrt2, 2, 2 + sqrt2
  const auto eig = oracle::jacobi_eigen(m);
  CHECK(eig.values(0) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
  CHECK(eig.values(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eig.values(2) == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));
  CHECK((m * eig.vectors - eig.vectors * eig.values.asDiagonal()).norm() <= 1e-12);
  CHECK((eig.vectors.transpose() * eig.vectors - Matrix::Identity(3, 3)).norm() <= 1e-13);

  Xoshiro256 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = random_dim(rng, 1, 32);
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.uniform(-1.0, 1.0);
    const auto e = oracle::jacobi_eigen(a);
    CHECK((a * e.vectors - e.vectors * e.values.asDiagonal()).norm() <= 1e-11 * a.norm());
    const Vector reference = Eigen::SelfAdjointEigenSolver<Matrix>(a).eigenvalues();
    CHECK((e.values - reference).cwiseAbs().maxCoeff() <= 1e-12 * a.norm());
  }
}

TEST_CASE("generalized_eig_min: diagonal and proportional pairs") {
  Matrix s_w = Matrix::Zero(2, 2);
  s_w.diagonal() << 2.0, 5.0;
  const auto diag = oracle::generalized_eig_min(ScatterPair(s_w, Matrix::Identity(2, 2)));
  CHECK(diag.lambda_min == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(diag.v_min(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(diag.v_min(1)) <= 1e-15);

  const ScatterPair base = synthesize_scatter(4, 12, {0.4, 0.6});
  const ScatterPair proportional(3.0 * base.s_b(), base.s_b());
  CHECK(oracle::generalized_eig_min(proportional).lambda_min == doctest::Approx(3.0).epsilon(1e-12));
  Xoshiro256 rng(4);
  for (int i = 0; i < 10; ++i)
    CHECK(rayleigh_loss(EffectiveWeights(random_vector(rng, 4, -1.0, 1.0)), proportional) ==
          doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("generalized_eig_min on 2x2 pairs matches the characteristic polynomial") {
  Xoshiro256 rng(13);
  for (int i = 0; i < 100; ++i) {
    const ScatterPair pair = random_pair(rng, 2);
    const double want = closed_form_lambda_min(pair);
    const double got = oracle::generalized_eig_min(pair).lambda_min;
    CHECK(std::abs(got - want) <= 1e-10 * want);
  }
  const ScatterPair fixed = synthesize_scatter(2, 42, {0.4, 0.6});
  CHECK(std::abs(oracle::generalized_eig_min(fixed).lambda_min - closed_form_lambda_min(fixed)) <=
        1e-10 * closed_form_lambda_min(fixed));
}

TEST_CASE("generalized eigen residual, attainment and sign convention") {
  Xoshiro256 rng(19);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index dim = random_dim(rng, 2, 8);
    const ScatterPair pair = random_pair(rng, dim);
    const auto r = oracle::generalized_eig_min(pair);
    const Vector sw_v = pair.s_w() * r.v_min;
    CHECK(r.lambda_min > 0.0);
    CHECK((sw_v - r.lambda_min * pair.s_b() * r.v_min).norm() <= 1e-8 * sw_v.norm());
    CHECK(std::abs(rayleigh_loss(EffectiveWeights(r.v_min), pair) - r.lambda_min) <= 1e-8 * r.lambda_min);
    CHECK(r.v_min.norm() == doctest::Approx(1.0).epsilon(1e-14));
    Eigen::Index first = 0;
    while (r.v_min(first) == 0.0) ++first;
    CHECK(r.v_min(first) > 0.0);

    // Third route: Eigen's generalized solver.
    const Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(pair.s_w(), pair.s_b());
    // Eigen's own answer carries error relative to the top of the spectrum.
    CHECK(std::abs(ges.eigenvalues()(0) - r.lambda_min) <= 1e-12 * ges.eigenvalues().maxCoeff());
  }
}

TEST_CASE("experiment pair oracle values") {
  const ScatterPair pair = synthesize_scatter(5, 8086, {0.4, 0.6});
  const Vector all = oracle::generalized_eigenvalues(pair);
  // scipy.linalg.eigh on the same matrices: 7.43307635e-03 ... 5.10752980e+01.
  CHECK(all(0) == doctest::Approx(7.43307635e-03).epsilon(1e-8));
  CHECK(all(4) == doctest::Approx(5.10752980e+01).epsilon(1e-8));
  CHECK(oracle::generalized_eig_min(pair).lambda_min == doctest::Approx(all(0)).epsilon(1e-12));
}
