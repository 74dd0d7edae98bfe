#pragma once

// The full desk-scale verification battery: closed-form anchors for the
// eigenvalue and the measure, the push-forward identity, rank-one and
// anisotropy decay trends, mass concentration, Dirichlet exactness,
// self-similarity, and the energy comparison. Shared by the CLI `verify`
// subcommand and the acceptance suite.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsg/table.hpp"

namespace hsg {

struct CheckResult {
  std::string name;
  int criterion = 0;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  // Wall-clock rows; kept out of report files so reruns stay byte-identical.
  bool volatile_row = false;
};

struct VerifySummary {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

// Test-only fault injection hooks.
struct VerifyOverrides {
  std::optional<double> beta_override;
  // Run only checks whose name contains one of these substrings.
  std::vector<std::string> name_filter;
};

VerifySummary run_verify(std::uint64_t seed, const VerifyOverrides& overrides = {});

// Deterministic rows only unless include_volatile is set.
Table verify_table(const VerifySummary& summary, bool include_volatile);

}  // namespace hsg
