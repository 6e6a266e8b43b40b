#pragma once

#include <filesystem>

#include "casimir/campaign.hpp"
#include "casimir/config.hpp"

namespace casimir {

// Throws IoError when the directory cannot be created or written.
void check_output_directory(const std::filesystem::path& dir);

// Per-component CSV (t, GammaE, GammaH, F, Delta), summary.json,
// timings.csv, and optionally the kernel cache and |Im g(-t)| plot data.
void emit_outputs(const CampaignResult& r, const RunConfig& cfg);

std::string summary_json(const CampaignResult& r, const RunConfig& cfg);

}  // namespace casimir
