#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace dlnlda {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when operand shapes disagree (vector length vs. matrix dim, etc.).
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

inline void require_dim(Eigen::Index got, Eigen::Index want,
                        const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + ": expected length " +
                            std::to_string(want) + ", got " +
                            std::to_string(got));
  }
}

}  // namespace dlnlda
