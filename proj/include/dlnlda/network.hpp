#pragma once

#include "dlnlda/objective.hpp"
#include "dlnlda/types.hpp"

namespace dlnlda {

/// Layer parameters of a depth-L diagonal linear network: row k holds the
/// diagonal of layer k, so entry (k, i) is u_i^(k). Every entry must be
/// strictly positive and finite; the constructor throws otherwise.
class LayerStack {
 public:
  explicit LayerStack(Matrix u);

  const Matrix& weights() const noexcept { return u_; }
  Eigen::Index depth() const noexcept { return u_.rows(); }
  Eigen::Index dim() const noexcept { return u_.cols(); }
  double operator()(Eigen::Index layer, Eigen::Index i) const { return u_(layer, i); }

 private:
  Matrix u_;
};

/// Largest |(u_i^(k))^2 - (u_i^(m))^2| over i, for each layer pair (k, m).
/// per_pair is depth x depth and symmetric with a zero diagonal.
struct BalanceReport {
  double max_residual = 0.0;
  Matrix per_pair;
};

/// w_i = prod_k u_i^(k).
EffectiveWeights effective_weights(const LayerStack& stack);

/// u_i^(k) = w0_i^(1/L) for every layer k.
LayerStack balanced_init(const Vector& w0_magnitudes, Eigen::Index depth);

/// dL/du_i^(k) = (dL/dw_i) * w_i / u_i^(k). Returns a depth x dim matrix.
Matrix layer_gradients(const LayerStack& stack, const Vector& loss_grad);

BalanceReport balance_residual(const LayerStack& stack);

/// Pairwise (u_i^(k))^2 - (u_i^(m))^2 for k < m, flattened as
/// [(k, m) pairs in lexicographic order] x dim. The conserved constants C of
/// the layer flow; used to check unbalanced starts.
Matrix squared_differences(const LayerStack& stack);

}  // namespace dlnlda
