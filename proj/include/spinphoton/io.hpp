#pragma once

#include <string>

#include "spinphoton/photonics.hpp"
#include "spinphoton/runner.hpp"

namespace spinphoton {

/// Clicks table: comma-separated, header row mandatory, one row per heralded
/// attempt. Times in microseconds with 6 decimals, phases in radians.
std::string clicks_to_csv(const ClickDataset& dataset);
ClickDataset clicks_from_csv(const std::string& text);
void write_clicks_csv(const std::string& path, const ClickDataset& dataset);
ClickDataset read_clicks_csv(const std::string& path);

/// Deterministic run identifier derived from the canonical config + seed.
std::string run_id(const std::string& canonical_config, std::uint64_t seed);

/// JSON manifest binding a run's outputs to the config snapshot and seed.
std::string manifest_json(const std::string& canonical_config, std::uint64_t seed,
                          const std::string& tool_version,
                          const std::vector<std::string>& output_paths,
                          const RunSummary& summary);

std::string summary_to_kv(const RunSummary& summary);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace spinphoton
