// Seeded randomized invariant suites over all modules. Each suite returns
// the worst deviation it saw so failures are diagnosable from the summary.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nlshare/sequential_engine.hpp"

namespace nlshare {

struct VerifyOptions {
  std::uint64_t seed = 1;
  int trials = 500;
  double tolerance = 1e-9;  // closed form vs brute force, SOS slack
  ChannelFn channel = bob_channel;
};

struct SuiteResult {
  std::string name;
  bool passed;
  double worst;
  std::string detail;
};

const std::vector<std::string>& verification_suite_names();

/// Throws DomainError for an unknown suite name.
SuiteResult run_suite(std::string_view name, const VerifyOptions& options);

std::vector<SuiteResult> run_verification(const VerifyOptions& options);

/// Bob channel with the input weights changed to 0.6 / 0.4. Still a valid
/// channel, but no longer the one the closed forms describe.
ChannelFn faulty_channel();

}  // namespace nlshare
