#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "dlnlda/types.hpp"

namespace dlnlda {

/// Closed interval [lo, hi] the raw factor entries are drawn from.
struct Spread {
  double lo = 0.4;
  double hi = 0.6;
};

/// Intra-class (s_w) and inter-class (s_b) scatter matrices. Both are
/// symmetric positive definite with shape dim x dim; the constructor checks
/// this and throws std::invalid_argument otherwise.
class ScatterPair {
 public:
  ScatterPair(Matrix s_w, Matrix s_b);

  const Matrix& s_w() const noexcept { return s_w_; }
  const Matrix& s_b() const noexcept { return s_b_; }
  Eigen::Index dim() const noexcept { return s_w_.rows(); }

 private:
  Matrix s_w_;
  Matrix s_b_;
};

enum class SpdVerdict { ok, not_symmetric, not_positive_definite };

std::string_view to_string(SpdVerdict v) noexcept;

/// Symmetric within absolute 1e-12 and Cholesky succeeds with positive
/// pivots. Non-square input throws DimensionMismatch.
SpdVerdict validate_spd(const Matrix& m);

/// The two raw uniform factors (G_w, G_b) before the Gram step. G_w comes
/// from Xoshiro256(seed); G_b from a copy of it advanced by jump(). Both are
/// filled row-major.
std::pair<Matrix, Matrix> draw_scatter_factors(Eigen::Index dim,
                                               std::uint64_t seed,
                                               Spread spread);

/// M = G G^T + eps I with eps = dim * hi^2 * 1e-6, for each raw factor.
/// Rejects dim < 1, lo <= 0 and hi < lo. hi == lo is a point mass.
ScatterPair synthesize_scatter(Eigen::Index dim, std::uint64_t seed,
                               Spread spread);

/// Jitter added to the diagonal by synthesize_scatter.
double scatter_jitter(Eigen::Index dim, Spread spread) noexcept;

/// {dim, seed, spread: [lo, hi], s_w: row-major, s_b: row-major}
nlohmann::json scatter_to_json(const ScatterPair& pair, std::uint64_t seed,
                               Spread spread);
ScatterPair scatter_from_json(const nlohmann::json& doc);

nlohmann::json matrix_to_row_major(const Matrix& m);

}  // namespace dlnlda
