#pragma once

#include "json_writer.hpp"
#include "nlsb/diagnostics.hpp"

namespace nlsb {

Json branch_point_json(const BranchPoint& point);
Json strings_json(const std::vector<std::string>& items);
Json report_envelope(const char* subcommand);
Json profile_summary_json(const RadialProfile& profile);

}  // namespace nlsb
