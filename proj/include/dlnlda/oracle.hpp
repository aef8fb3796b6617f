#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "dlnlda/scatter.hpp"
#include "dlnlda/types.hpp"

// Reference computations used to check the main code paths. Nothing here
// calls into the objective, network or dynamics modules, and nothing here
// uses Eigen's decompositions; matrices are read element by element.
namespace dlnlda::oracle {

/// f evaluated to a non-finite value during differencing.
class NonFiniteEvaluation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ScalarField = std::function<double(const Vector&)>;

/// Central differences (f(w + h e_i) - f(w - h e_i)) / (2h).
Vector fd_gradient(const ScalarField& f, const Vector& w, double h);

/// sum_ij v_i m_ij v_j with an explicit double loop.
double quadratic_form(const Matrix& m, const Vector& v);

/// quadratic_form(s_w, w) / quadratic_form(s_b, w).
double rayleigh_quotient(const ScatterPair& pair, const Vector& w);

/// Lower-triangular R with m = R R^T (Cholesky-Banachiewicz). Throws
/// std::domain_error on a non-positive pivot.
Matrix cholesky_lower(const Matrix& m);

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // column j pairs with values(j)
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is at most
/// `off_tol` (relative to the full Frobenius norm) or `max_sweeps` is hit.
SymmetricEigen jacobi_eigen(const Matrix& sym, double off_tol = 1e-12,
                            int max_sweeps = 100);

struct GeneralizedEigenResult {
  double lambda_min = 0.0;
  Vector v_min;  // unit l2 norm, first nonzero component positive
};

/// Smallest eigenpair of S_w v = lambda S_b v: factor S_b = R R^T, solve the
/// symmetric problem R^-1 S_w R^-T y = lambda y by Jacobi, map v = R^-T y.
GeneralizedEigenResult generalized_eig_min(const ScatterPair& pair);

/// All generalized eigenvalues, ascending.
Vector generalized_eigenvalues(const ScatterPair& pair);

}  // namespace dlnlda::oracle
