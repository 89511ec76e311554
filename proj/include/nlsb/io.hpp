#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "nlsb/branch.hpp"
#include "nlsb/ground_states.hpp"
#include "nlsb/normalized_solver.hpp"

namespace nlsb {

inline constexpr const char* kReportSchemaVersion = "1.0";

/// `r,u,du` rows, 17 significant digits.
void write_profile_csv(const std::filesystem::path& path, const RadialProfile& profile);

/// One `lambda,rho,K,sup,PG,J,res_poho,res_nehari,mp_gap` row per grid point.
/// A failed point is preceded by a `# lambda=... failed: ...` comment and
/// written as a row of nan.
void write_branch_csv(const std::filesystem::path& path, const MassCurve& curve);

void write_text_file(const std::filesystem::path& path, const std::string& text);

// Complete report.json documents; every one carries schema_version and
// subcommand.
std::string check_report_json(const NonlinearitySpec& spec, int dimension);
std::string shoot_report_json(const RadialProfile& profile);
std::string ground_state_report_json(const GroundState& state);
std::string branch_report_json(const MassCurve& curve, const NonlinearitySpec& spec, int dimension,
                               const std::optional<MassExtremum>& extremum);
std::string normalize_report_json(const CaseReport& report, const NonlinearitySpec& spec);

}  // namespace nlsb
