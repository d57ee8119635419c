#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ugraphon/config.hpp"

namespace ugraphon {

struct OutputFile {
  std::string name;
  std::string content;
};

struct ExperimentOutput {
  std::vector<OutputFile> files;
  std::vector<std::string> notes;  // one-line summaries for the terminal
};

/// Runs the configured experiment entirely in memory.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// Writes every output file plus manifest.json into `dir` (created if needed).
void write_outputs(const ExperimentOutput& output, const ExperimentConfig& cfg, const std::filesystem::path& dir);

}  // namespace ugraphon
