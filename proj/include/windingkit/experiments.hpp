#ifndef WINDINGKIT_EXPERIMENTS_HPP
#define WINDINGKIT_EXPERIMENTS_HPP

#include <string>

#include "windingkit/config.hpp"

namespace wk {

inline constexpr const char* kToolVersion = "windingkit 0.1.0";

// Exit codes: 0 success, 1 usage/config error, 2 acceptance-check failure.
// Each command writes its data files plus manifest.json into out_dir.
int cmd_solenoid_check(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_kernel(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_density(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace wk

#endif
