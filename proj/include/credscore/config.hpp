#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "credscore/cohort.hpp"
#include "credscore/regression.hpp"

namespace credscore {

/// Everything the pipeline needs: simulation and training parameters,
/// output directory and which stages run-all executes.
struct PipelineConfig {
    SimulationConfig sim;
    TrainConfig train;
    std::filesystem::path out_dir = "out";
    std::vector<std::string> stages = {"simulate", "train", "verify", "score"};
};

/// Parse a flat key=value config ('#' starts a comment). Unknown keys and
/// malformed lines raise ConfigError naming the line number.
PipelineConfig parse_config_text(std::string_view text, std::string_view source_name);

/// File wrapper around parse_config_text; throws IoError when unreadable.
PipelineConfig parse_config_file(const std::filesystem::path& path);

}  // namespace credscore
