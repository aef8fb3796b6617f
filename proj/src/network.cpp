#include "dlnlda/network.hpp"

#include <cmath>
#include <string>

namespace dlnlda {

LayerStack::LayerStack(Matrix u) : u_(std::move(u)) {
  require(u_.rows() >= 1, "layer stack: depth must be at least 1");
  require(u_.cols() >= 1, "layer stack: dim must be at least 1");
  require(u_.allFinite(), "layer stack: entries must be finite");
  require((u_.array() > 0.0).all(), "layer stack: entries must be strictly positive");
}

EffectiveWeights effective_weights(const LayerStack& stack) {
  return EffectiveWeights(stack.weights().colwise().prod().transpose());
}

LayerStack balanced_init(const Vector& w0_magnitudes, Eigen::Index depth) {
  require(depth >= 1, "balanced_init: depth must be at least 1");
  require(w0_magnitudes.size() >= 1, "balanced_init: empty magnitude vector");
  require(w0_magnitudes.allFinite() && (w0_magnitudes.array() > 0.0).all(),
          "balanced_init: magnitudes must be positive and finite");
  const double inv_depth = 1.0 / static_cast<double>(depth);
  Matrix u(depth, w0_magnitudes.size());
  for (Eigen::Index i = 0; i < w0_magnitudes.size(); ++i) {
    u.col(i).setConstant(std::pow(w0_magnitudes(i), inv_depth));
  }
  return LayerStack(std::move(u));
}

Matrix layer_gradients(const LayerStack& stack, const Vector& loss_grad) {
  require_dim(loss_grad.size(), stack.dim(), "layer_gradients: loss_grad");
  const Vector w = effective_weights(stack).values();
  Matrix g(stack.depth(), stack.dim());
  for (Eigen::Index k = 0; k < stack.depth(); ++k)
    for (Eigen::Index i = 0; i < stack.dim(); ++i)
      g(k, i) = loss_grad(i) * (w(i) / stack(k, i));
  return g;
}

BalanceReport balance_residual(const LayerStack& stack) {
  const Eigen::Index depth = stack.depth();
  const Matrix squares = stack.weights().array().square().matrix();
  BalanceReport report{0.0, Matrix::Zero(depth, depth)};
  for (Eigen::Index k = 0; k < depth; ++k) {
    for (Eigen::Index m = k + 1; m < depth; ++m) {
      const double worst = (squares.row(k) - squares.row(m)).cwiseAbs().maxCoeff();
      report.per_pair(k, m) = worst;
      report.per_pair(m, k) = worst;
      report.max_residual = std::max(report.max_residual, worst);
    }
  }
  return report;
}

Matrix squared_differences(const LayerStack& stack) {
  const Eigen::Index depth = stack.depth();
  const Matrix squares = stack.weights().array().square().matrix();
  Matrix out(depth * (depth - 1) / 2, stack.dim());
  Eigen::Index row = 0;
  for (Eigen::Index k = 0; k < depth; ++k)
    for (Eigen::Index m = k + 1; m < depth; ++m) out.row(row++) = squares.row(k) - squares.row(m);
  return out;
}

}  // namespace dlnlda
