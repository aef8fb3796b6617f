#pragma once

#include "dlnlda/scatter.hpp"
#include "dlnlda/types.hpp"

namespace dlnlda {

/// End-to-end weights w of a diagonal network (w_i = prod_k u_i^(k)).
/// Strong type so layer parameters and effective weights cannot be mixed up.
class EffectiveWeights {
 public:
  EffectiveWeights() = default;
  explicit EffectiveWeights(Vector w) : w_(std::move(w)) {}

  const Vector& values() const noexcept { return w_; }
  Eigen::Index size() const noexcept { return w_.size(); }
  double operator[](Eigen::Index i) const { return w_(i); }

 private:
  Vector w_;
};

// The loss is minimized: L(w) = (w^T S_w w) / (w^T S_b w). Its infimum is the
// *smallest* generalized eigenvalue of (S_w, S_b), which is the opposite
// orientation from classical Fisher LDA (maximize between over within).
//
// All four functions reject a zero w and a length that does not match the
// pair's dim.

double rayleigh_loss(const EffectiveWeights& w, const ScatterPair& pair);

/// grad L = (2 / w^T S_b w) (S_w w - L(w) S_b w).
Vector rayleigh_gradient(const EffectiveWeights& w, const ScatterPair& pair);

/// |L(alpha w) - L(w)| / |L(w)|. alpha == 0 is rejected.
double homogeneity_residual(const EffectiveWeights& w, const ScatterPair& pair,
                            double alpha);

/// |w^T grad L| / (|w| |grad L| + 1e-30).
double orthogonality_residual(const EffectiveWeights& w,
                              const ScatterPair& pair);

inline constexpr double kOrthogonalityGuard = 1e-30;

}  // namespace dlnlda
