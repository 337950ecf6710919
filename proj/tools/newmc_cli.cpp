#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"newmc: matrix coefficient and lattice counting experiments"};
  std::string task, config, out = "out";
  std::int64_t seed = -1;
  int threads = 0;
  app.add_option("--task", task, "task name (overrides the config)");
  app.add_option("--config", config, "JSON config file");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_option("--threads", threads, "worker threads (overrides the config)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  nlohmann::json cfg = nlohmann::json::object();
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) {
      std::cerr << "config error: cannot open " << config << "\n";
      return 2;
    }
    try {
      cfg = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "config error: " << config << ": " << e.what() << "\n";
      return 2;
    }
    if (!cfg.is_object()) {
      std::cerr << "config error: " << config << ": expected a JSON object\n";
      return 2;
    }
  }
  if (!task.empty()) cfg["task"] = task;
  if (seed >= 0) cfg["seed"] = seed;
  if (threads > 0) cfg["threads"] = threads;
  if (!cfg.contains("task")) {
    std::cerr << "config error: config.task: required string is missing\n";
    return 2;
  }
  return newmc::runner::runTask(cfg, out);
}
