#include "dlnlda/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace dlnlda::oracle {

Vector fd_gradient(const ScalarField& f, const Vector& w, double h) {
  require(h > 0.0 && std::isfinite(h), "fd_gradient: step must be positive");
  Vector grad(w.size());
  Vector probe = w;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    probe(i) = w(i) + h;
    const double plus = f(probe);
    probe(i) = w(i) - h;
    const double minus = f(probe);
    probe(i) = w(i);
    if (!std::isfinite(plus) || !std::isfinite(minus))
      throw NonFiniteEvaluation("fd_gradient: non-finite value along coordinate " +
                                std::to_string(i));
    grad(i) = (plus - minus) / (2.0 * h);
  }
  return grad;
}

double quadratic_form(const Matrix& m, const Vector& v) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) sum += v(i) * m(i, j) * v(j);
  return sum;
}

double rayleigh_quotient(const ScatterPair& pair, const Vector& w) {
  return quadratic_form(pair.s_w(), w) / quadratic_form(pair.s_b(), w);
}

Matrix cholesky_lower(const Matrix& m) {
  const Eigen::Index n = m.rows();
  Matrix r = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double sum = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) sum -= r(i, k) * r(j, k);
      if (i == j) {
        if (!(sum > 0.0)) throw std::domain_error("cholesky_lower: matrix is not positive definite");
        r(i, i) = std::sqrt(sum);
      } else {
        r(i, j) = sum / r(j, j);
      }
    }
  }
  return r;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

double frobenius_norm(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

// Solves R^T x = b for lower-triangular R (back substitution on R^T).
Vector solve_upper_transpose(const Matrix& r, const Vector& b) {
  const Eigen::Index n = r.rows();
  Vector x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double sum = b(i);
    for (Eigen::Index k = i + 1; k < n; ++k) sum -= r(k, i) * x(k);
    x(i) = sum / r(i, i);
  }
  return x;
}

// C = R^-1 M R^-T, symmetrized.
Matrix reduce_to_standard(const Matrix& r, const Matrix& m) {
  const Eigen::Index n = r.rows();
  // Y = R^-1 M (forward substitution column by column).
  Matrix y(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double sum = m(i, c);
      for (Eigen::Index k = 0; k < i; ++k) sum -= r(i, k) * y(k, c);
      y(i, c) = sum / r(i, i);
    }
  }
  // C = Y R^-T, i.e. C^T = R^-1 Y^T.
  Matrix ct(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double sum = y(c, i);
      for (Eigen::Index k = 0; k < i; ++k) sum -= r(i, k) * ct(k, c);
      ct(i, c) = sum / r(i, i);
    }
  }
  Matrix c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = 0.5 * (ct(i, j) + ct(j, i));
  return c;
}

// Solves a x = b by Gaussian elimination with partial pivoting. Returns false
// when a pivot is exactly zero.
bool solve_dense(Matrix a, Vector b, Vector& x) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) return false;
    if (pivot != col) {
      a.row(col).swap(a.row(pivot));
      std::swap(b(col), b(pivot));
    }
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double factor = a(r, col) / a(col, col);
      for (Eigen::Index c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
      b(r) -= factor * b(col);
    }
  }
  x.resize(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double sum = b(i);
    for (Eigen::Index c = i + 1; c < n; ++c) sum -= a(i, c) * x(c);
    x(i) = sum / a(i, i);
  }
  return x.allFinite();
}

double normalized_rayleigh(const ScatterPair& pair, Vector& v) {
  v /= std::sqrt(v.dot(v));
  return quadratic_form(pair.s_w(), v) / quadratic_form(pair.s_b(), v);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Matrix& sym, double off_tol, int max_sweeps) {
  require(sym.rows() == sym.cols(), "jacobi_eigen: matrix must be square");
  const Eigen::Index n = sym.rows();
  Matrix a = sym;
  Matrix v = Matrix::Identity(n, n);
  const double scale = std::max(frobenius_norm(a), std::numeric_limits<double>::min());

  int sweep = 0;
  for (; sweep < max_sweeps && off_diagonal_norm(a) > off_tol * scale; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        rotated = true;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

  SymmetricEigen out{Vector(n), Matrix(n, n), sweep};
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.values(j) = a(src, src);
    out.vectors.col(j) = v.col(src);
  }
  return out;
}

GeneralizedEigenResult generalized_eig_min(const ScatterPair& pair) {
  const Matrix r = cholesky_lower(pair.s_b());
  const SymmetricEigen eig = jacobi_eigen(reduce_to_standard(r, pair.s_w()));

  Vector v = solve_upper_transpose(r, eig.vectors.col(0));
  double lambda = normalized_rayleigh(pair, v);

  // Mapping back through R^-T amplifies the eigenvector error by the
  // conditioning of S_b; two shifted inverse-iteration steps recover it.
  for (int step = 0; step < 2; ++step) {
    Vector refined;
    const Matrix shifted = pair.s_w() - lambda * pair.s_b();
    if (!solve_dense(shifted, pair.s_b() * v, refined)) break;
    v = refined;
    lambda = normalized_rayleigh(pair, v);
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return {lambda, std::move(v)};
}

Vector generalized_eigenvalues(const ScatterPair& pair) {
  const Matrix r = cholesky_lower(pair.s_b());
  return jacobi_eigen(reduce_to_standard(r, pair.s_w())).values;
}

}  // namespace dlnlda::oracle
