#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stargraph {

struct ValidationCheck {
  std::string name;
  double worst = 0.0;      // worst measured value
  double tolerance = 0.0;  // pass iff worst <= tolerance
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const;
};

/// Runs every module's invariant suite with reproducible randomness.
ValidationReport run_validation(std::uint64_t seed);

std::string format_report(const ValidationReport& report);

}  // namespace stargraph
