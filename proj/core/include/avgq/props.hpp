#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace avgq {

struct PropertySuiteResult {
  std::string name;
  long trials = 0;
  long failures = 0;
  double worst_violation = 0.0;  // most positive (lhs - rhs) seen, 0 if none
  std::string detail;            // description of the first failure

  bool passed() const { return failures == 0; }
};

/// Randomized checks of the operator laws the algorithms rely on:
/// the projection identity and seminorm axioms, the centered sup/span
/// sandwich, non-expansiveness and affine growth of the one-step target
/// operator, certified contraction factors of the exact and asynchronous
/// updates on random models, the Lipschitz/growth bounds of the sampled
/// update, and its exact unbiasedness under the stationary law (full
/// enumeration, residual < 1e-10).
std::vector<PropertySuiteResult> run_property_suites(long trials, uint64_t seed = 20240901);

bool all_passed(const std::vector<PropertySuiteResult>& results);

}  // namespace avgq
