#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nlsb {

struct Measurement {
  std::string name;
  double value;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::vector<Measurement> measured;
  std::string detail;
};

struct VerificationOptions {
  int jobs = 1;
  /// Re-run the suite serially and compare the serialized results.
  bool check_determinism = true;
};

struct VerificationReport {
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
};

/// Runs the ten acceptance checks. Timing is not part of the result so
/// that repeated runs serialize identically.
VerificationReport run_verification(const VerificationOptions& options = {});

std::string verify_report_json(const VerificationReport& report);

/// Runs the suite and writes out_dir/report.json.
VerificationReport run_verification_to(const std::filesystem::path& out_dir,
                                       const VerificationOptions& options = {});

}  // namespace nlsb
