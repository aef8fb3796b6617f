#include "dlnlda/objective.hpp"

#include <cmath>

namespace dlnlda {

namespace {

struct QuadForms {
  Vector sw_w;
  Vector sb_w;
  double num;
  double den;
};

QuadForms evaluate(const EffectiveWeights& w, const ScatterPair& pair) {
  require_dim(w.size(), pair.dim(), "rayleigh_loss: w");
  const Vector& v = w.values();
  require(!v.isZero(0.0), "rayleigh_loss: w must be nonzero");
  QuadForms q{pair.s_w() * v, pair.s_b() * v, 0.0, 0.0};
  q.num = v.dot(q.sw_w);
  q.den = v.dot(q.sb_w);
  require(q.den > 0.0, "rayleigh_loss: w^T S_b w must be positive");
  return q;
}

}  // namespace

double rayleigh_loss(const EffectiveWeights& w, const ScatterPair& pair) {
  const QuadForms q = evaluate(w, pair);
  return q.num / q.den;
}

Vector rayleigh_gradient(const EffectiveWeights& w, const ScatterPair& pair) {
  const QuadForms q = evaluate(w, pair);
  const double loss = q.num / q.den;
  return (2.0 / q.den) * (q.sw_w - loss * q.sb_w);
}

double homogeneity_residual(const EffectiveWeights& w, const ScatterPair& pair,
                            double alpha) {
  require(alpha != 0.0 && std::isfinite(alpha),
          "homogeneity_residual: alpha must be finite and nonzero");
  const double base = rayleigh_loss(w, pair);
  const double scaled = rayleigh_loss(EffectiveWeights(alpha * w.values()), pair);
  return std::abs(scaled - base) / std::abs(base);
}

double orthogonality_residual(const EffectiveWeights& w, const ScatterPair& pair) {
  const Vector grad = rayleigh_gradient(w, pair);
  const Vector& v = w.values();
  return std::abs(v.dot(grad)) / (v.norm() * grad.norm() + kOrthogonalityGuard);
}

}  // namespace dlnlda
