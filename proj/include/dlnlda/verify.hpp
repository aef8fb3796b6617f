#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dlnlda {

enum class VerifyScope { objective, network, dynamics, all };

VerifyScope parse_verify_scope(std::string_view text);

struct InvariantCheck {
  std::string module;
  std::string name;
  double tolerance = 0.0;
  double worst = 0.0;  // largest residual seen; passes when worst <= tolerance
  int samples = 0;

  bool passed() const { return worst <= tolerance; }
};

struct VerificationReport {
  std::vector<InvariantCheck> checks;

  bool all_passed() const;
  std::string render() const;
};

/// Runs the randomized invariant checks of the selected modules with
/// `trials` draws each, seeded deterministically from `seed`.
VerificationReport verify_suite(VerifyScope scope, int trials, std::uint64_t seed);

}  // namespace dlnlda
