#include "dlnlda/scatter.hpp"

#include <cmath>
#include <string>

#include "dlnlda/rng.hpp"

namespace dlnlda {

namespace {

constexpr double kSymmetryTol = 1e-12;

Matrix fill_uniform(Eigen::Index dim, Xoshiro256& rng, Spread spread) {
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.uniform(spread.lo, spread.hi);
  return g;
}

Matrix gram_with_jitter(const Matrix& g, double eps) {
  Matrix m = g * g.transpose();
  // Gram products are symmetric in exact arithmetic; enforce it bitwise.
  m = 0.5 * (m + m.transpose()).eval();
  m.diagonal().array() += eps;
  return m;
}

void check_spread(Spread spread) {
  require(spread.lo > 0.0, "spread: lo must be positive");
  require(spread.hi >= spread.lo, "spread: hi must not be below lo");
  require(std::isfinite(spread.hi), "spread: hi must be finite");
}

}  // namespace

ScatterPair::ScatterPair(Matrix s_w, Matrix s_b)
    : s_w_(std::move(s_w)), s_b_(std::move(s_b)) {
  require(s_w_.rows() >= 1, "scatter pair: dim must be at least 1");
  if (s_w_.rows() != s_w_.cols() || s_b_.rows() != s_b_.cols() ||
      s_w_.rows() != s_b_.rows()) {
    throw DimensionMismatch("scatter pair: matrices must be square and equal-sized");
  }
  const SpdVerdict vw = validate_spd(s_w_);
  const SpdVerdict vb = validate_spd(s_b_);
  require(vw == SpdVerdict::ok, "scatter pair: s_w " + std::string(to_string(vw)));
  require(vb == SpdVerdict::ok, "scatter pair: s_b " + std::string(to_string(vb)));
}

std::string_view to_string(SpdVerdict v) noexcept {
  switch (v) {
    case SpdVerdict::ok: return "ok";
    case SpdVerdict::not_symmetric: return "not-symmetric";
    case SpdVerdict::not_positive_definite: return "not-positive-definite";
  }
  return "unknown";
}

SpdVerdict validate_spd(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("validate_spd: matrix is " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()) + ", not square");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (!(std::abs(m(i, j) - m(j, i)) <= kSymmetryTol)) return SpdVerdict::not_symmetric;

  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) return SpdVerdict::not_positive_definite;
  const Vector pivots = Matrix(llt.matrixL()).diagonal();
  if (!((pivots.array() > 0.0).all() && pivots.allFinite()))
    return SpdVerdict::not_positive_definite;
  return SpdVerdict::ok;
}

double scatter_jitter(Eigen::Index dim, Spread spread) noexcept {
  return static_cast<double>(dim) * spread.hi * spread.hi * 1e-6;
}

std::pair<Matrix, Matrix> draw_scatter_factors(Eigen::Index dim, std::uint64_t seed,
                                               Spread spread) {
  require(dim >= 1, "synthesize_scatter: dim must be at least 1");
  check_spread(spread);
  Xoshiro256 within(seed);
  Xoshiro256 between = within;
  between.jump();
  Matrix g_w = fill_uniform(dim, within, spread);
  Matrix g_b = fill_uniform(dim, between, spread);
  return {std::move(g_w), std::move(g_b)};
}

ScatterPair synthesize_scatter(Eigen::Index dim, std::uint64_t seed, Spread spread) {
  auto [g_w, g_b] = draw_scatter_factors(dim, seed, spread);
  const double eps = scatter_jitter(dim, spread);
  return ScatterPair(gram_with_jitter(g_w, eps), gram_with_jitter(g_b, eps));
}

nlohmann::json matrix_to_row_major(const Matrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

namespace {

Matrix matrix_from_row_major(const nlohmann::json& values, Eigen::Index dim) {
  require(values.is_array(), "scatter json: matrix must be an array");
  if (static_cast<Eigen::Index>(values.size()) != dim * dim)
    throw DimensionMismatch("scatter json: matrix has " + std::to_string(values.size()) +
                            " entries, expected " + std::to_string(dim * dim));
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      m(i, j) = values.at(static_cast<std::size_t>(i * dim + j)).get<double>();
  return m;
}

}  // namespace

nlohmann::json scatter_to_json(const ScatterPair& pair, std::uint64_t seed, Spread spread) {
  return nlohmann::json{{"dim", pair.dim()},
                        {"seed", seed},
                        {"spread", {spread.lo, spread.hi}},
                        {"s_w", matrix_to_row_major(pair.s_w())},
                        {"s_b", matrix_to_row_major(pair.s_b())}};
}

ScatterPair scatter_from_json(const nlohmann::json& doc) {
  const auto dim = doc.at("dim").get<Eigen::Index>();
  require(dim >= 1, "scatter json: dim must be at least 1");
  return ScatterPair(matrix_from_row_major(doc.at("s_w"), dim),
                     matrix_from_row_major(doc.at("s_b"), dim));
}

}  // namespace dlnlda
