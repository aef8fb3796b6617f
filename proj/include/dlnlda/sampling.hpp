#pragma once

#include <cstdint>

#include "dlnlda/rng.hpp"
#include "dlnlda/scatter.hpp"
#include "dlnlda/types.hpp"

namespace dlnlda {

// Random draws for property sweeps.

inline Eigen::Index random_dim(Xoshiro256& rng, Eigen::Index lo, Eigen::Index hi) {
  return lo + static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Scatter pair with a random seed and a random spread, lo in [0.05, 0.5],
/// width in [0.1, 1.0].
inline ScatterPair random_pair(Xoshiro256& rng, Eigen::Index dim) {
  const double lo = rng.uniform(0.05, 0.5);
  const double hi = lo + rng.uniform(0.1, 1.0);
  return synthesize_scatter(dim, rng.next(), Spread{lo, hi});
}

/// Entries uniform on [lo, hi], rescaled so the l2 norm is `norm` when it is
/// positive.
inline Vector random_vector(Xoshiro256& rng, Eigen::Index dim, double lo, double hi,
                            double norm = 0.0) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.uniform(lo, hi);
  if (norm > 0.0) v *= norm / v.norm();
  return v;
}

}  // namespace dlnlda
