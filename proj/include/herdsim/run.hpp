#pragma once

#include "herdsim/agents.hpp"
#include "herdsim/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace herdsim {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumeric = 2 };

/// Executes the configured mode, writing data files and manifest.json into `out_dir`.
/// Returns the written file names (relative to out_dir). Throws on failure.
std::vector<std::filesystem::path> execute(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// execute() with errors reported to `err` and mapped to exit codes.
int run(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& err);

/// Default macroscopic starting points: zero-drift fixed points of the models.
double default_initial_x(const TwoStateParams& p);
MacroState default_initial_macro(const ThreeStateParams& p);

/// Rounds a macroscopic three-state point to occupation counts summing to n.
AgentPopulation population_from_macro(const MacroState& s, std::int64_t n);

}  // namespace herdsim
