#pragma once

#include <string>
#include <vector>

namespace spinphoton::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 ok, 1 usage, 2 validation/runtime.
int cmd_simulate(const std::string& config_path, std::uint64_t seed_override,
                 bool has_seed_override, std::uint64_t attempts,
                 std::uint64_t heralds, const std::string& out_dir,
                 int threads_override);
int cmd_budget(const std::string& config_path, const std::string& format);
int cmd_analyze(const std::string& clicks_path, const std::string& config_path,
                const std::string& out_dir, const std::string& format);
int cmd_phases(const std::string& apd_path, const std::string& out_path);
int cmd_timeline(const std::string& config_path);

int run(const std::vector<std::string>& args);

}  // namespace spinphoton::cli
