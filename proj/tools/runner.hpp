#pragma once

// Batch driver: one JSON config selects a task, which writes <task>.csv and
// report.txt into the output directory.  Exit status 0 = every assertion
// held, 1 = some assertion failed, 2 = the config is invalid.

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace newmc::runner {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TaskOutput {
  std::string csv;
  std::string report;
  bool ok = true;
};

/// Runs cfg["task"] without touching the filesystem.  Throws ConfigError.
TaskOutput runTaskInMemory(const nlohmann::json& cfg);

/// Runs the task and writes <out>/<task>.csv and <out>/report.txt.
int runTask(const nlohmann::json& cfg, const std::filesystem::path& out);

}  // namespace newmc::runner
