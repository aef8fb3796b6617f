#include <doctest.h>

#include <cmath>

#include "dlnlda/objective.hpp"
#include "dlnlda/oracle.hpp"
#include "dlnlda/sampling.hpp"

using namespace dlnlda;

namespace {

ScatterPair diagonal_pair(std::initializer_list<double> w, std::initializer_list<double> b) {
  Vector dw(static_cast<Eigen::Index>(w.size())), db(static_cast<Eigen::Index>(b.size()));
  Eigen::Index i = 0;
  for (double x : w) dw(i++) = x;
  i = 0;
  for (double x : b) db(i++) = x;
  return ScatterPair(dw.asDiagonal(), db.asDiagonal());
}

const ScatterPair& reference_pair() {
  static const ScatterPair pair = synthesize_scatter(5, 8086, {0.4, 0.6});
  return pair;
}

}  // namespace

TEST_CASE("rayleigh_loss on a basis vector reads diagonal entries") {
  const ScatterPair pair = diagonal_pair({2, 7}, {4, 9});
  CHECK(rayleigh_loss(EffectiveWeights(Vector::Unit(2, 0)), pair) == 0.5);
  CHECK(rayleigh_loss(EffectiveWeights(Vector::Unit(2, 1)), pair) == doctest::Approx(7.0 / 9.0));
}

TEST_CASE("rayleigh_loss is 1 when S_w == S_b") {
  const ScatterPair base = synthesize_scatter(4, 3, {0.4, 0.6});
  const ScatterPair same(base.s_b(), base.s_b());
  Xoshiro256 rng(11);
  for (int i = 0; i < 20; ++i) {
    const EffectiveWeights w(random_vector(rng, 4, -2.0, 2.0));
    CHECK(rayleigh_loss(w, same) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rayleigh_gradient(w, same).norm() <= 1e-14);
    CHECK(orthogonality_residual(w, same) <= 1e-10);
  }
}

TEST_CASE("rayleigh_loss matches the element-wise double loop") {
  // Positive weights, as produced by the network. Mixed signs on this
  // near-singular pair cancel and lose digits in either summation order.
  Xoshiro256 rng(5);
  for (int i = 0; i < 50; ++i) {
    const Vector w = random_vector(rng, 5, 0.05, 2.0);
    const double want = oracle::rayleigh_quotient(reference_pair(), w);
    const double got = rayleigh_loss(EffectiveWeights(w), reference_pair());
    CHECK(std::abs(got - want) <= 1e-14 * std::abs(want));
    CHECK(got > 0.0);
  }
}

TEST_CASE("analytic gradient matches central differences") {
  Xoshiro256 rng(17);
  for (int i = 0; i < 50; ++i) {
    const Vector w = random_vector(rng, 5, 0.1, 2.0);
    const Vector numeric = oracle::fd_gradient(
        [](const Vector& x) { return oracle::rayleigh_quotient(reference_pair(), x); }, w, 1e-6);
    const Vector analytic = rayleigh_gradient(EffectiveWeights(w), reference_pair());
    CHECK((analytic - numeric).norm() <= 1e-6 * numeric.norm());
  }
}

TEST_CASE("gradient vanishes at generalized eigenvectors") {
  const auto optimum = oracle::generalized_eig_min(reference_pair());
  const Vector grad = rayleigh_gradient(EffectiveWeights(optimum.v_min), reference_pair());
  CHECK(grad.cwiseAbs().maxCoeff() <= 1e-10);

  const ScatterPair diag = diagonal_pair({2, 5, 3}, {1, 1, 1});
  CHECK(rayleigh_gradient(EffectiveWeights(Vector::Unit(3, 1)), diag).norm() == 0.0);
}

TEST_CASE("homogeneity residual") {
  Xoshiro256 rng(23);
  const EffectiveWeights w(random_vector(rng, 5, -1.0, 1.0));
  CHECK(homogeneity_residual(w, reference_pair(), 1.0) == 0.0);
  CHECK(homogeneity_residual(w, reference_pair(), 2.0) <= 1e-12);
  CHECK(homogeneity_residual(w, reference_pair(), -3.5) <= 1e-12);

  for (int i = 0; i < 100; ++i) {
    const Eigen::Index dim = random_dim(rng, 2, 10);
    const ScatterPair pair = random_pair(rng, dim);
    const Vector v = random_vector(rng, dim, -1.0, 1.0);
    for (double alpha : {1e-3, 1e3}) {
      CHECK(homogeneity_residual(EffectiveWeights(v), pair, alpha) <= 1e-12);
      // Both sides re-evaluated through the brute-force quadratic forms.
      const double base = oracle::rayleigh_quotient(pair, v);
      const double scaled = oracle::rayleigh_quotient(pair, alpha * v);
      CHECK(std::abs(scaled - base) <= 1e-12 * base);
    }
  }
  CHECK_THROWS_AS(homogeneity_residual(w, reference_pair(), 0.0), std::invalid_argument);
}

TEST_CASE("gradient is orthogonal to w") {
  Xoshiro256 rng(29);
  const EffectiveWeights w(random_vector(rng, 5, -1.0, 1.0));
  CHECK(orthogonality_residual(w, reference_pair()) <= 1e-10);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Index dim = random_dim(rng, 2, 16);
    const ScatterPair pair = random_pair(rng, dim);
    CHECK(orthogonality_residual(EffectiveWeights(random_vector(rng, dim, -1.0, 1.0)), pair) <= 1e-10);
  }
}

TEST_CASE("loss never drops below the smallest generalized eigenvalue") {
  Xoshiro256 rng(31);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index dim = random_dim(rng, 2, 8);
    const ScatterPair pair = random_pair(rng, dim);
    const double lambda_min = oracle::generalized_eig_min(pair).lambda_min;
    const double loss = rayleigh_loss(EffectiveWeights(random_vector(rng, dim, -1.0, 1.0)), pair);
    CHECK(loss >= lambda_min * (1.0 - 1e-10));
  }
}

TEST_CASE("objective rejects invalid input") {
  CHECK_THROWS_AS(rayleigh_loss(EffectiveWeights(Vector::Zero(5)), reference_pair()), std::invalid_argument);
  CHECK_THROWS_AS(rayleigh_loss(EffectiveWeights(Vector::Ones(4)), reference_pair()), DimensionMismatch);
  CHECK_THROWS_AS(rayleigh_gradient(EffectiveWeights(Vector::Ones(6)), reference_pair()), DimensionMismatch);
  CHECK_THROWS_AS(orthogonality_residual(EffectiveWeights(Vector::Zero(5)), reference_pair()), std::invalid_argument);
}
