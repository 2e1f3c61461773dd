#pragma once

#include <string>

namespace evoform {

/// Result of the full property suite. The report is line-oriented text, one
/// "[PASS]/[FAIL] name ..." line per property plus a trailing tally; it
/// contains no timings or machine identifiers, so identical seeds produce
/// byte-identical reports.
struct VerifyResult {
  std::string report;
  bool all_passed = false;
};

/// Runs every library invariant across the scenario suite with seeded
/// sampling. inject_fault adds a deliberately mislabeled family (symmetric
/// flag on an asymmetric evaluator) to prove the suite catches it; the
/// resulting report names the symmetry defect and all_passed goes false.
VerifyResult run_verify(unsigned long seed, bool inject_fault = false);

}  // namespace evoform
