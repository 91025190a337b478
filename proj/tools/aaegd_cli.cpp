// Experiment runner: run <config>, sweep <config> --axis --values, summarize <dir>.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aaegd/error.hpp"
#include "aaegd/experiment.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anderson-accelerated gradient and energy-adaptive solvers: experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run every solver of a config and write traces + summary");
  run->add_option("config", config_path, "Experiment config (INI)")->required()->check(CLI::ExistingFile);
  run->add_option("--set", overrides, "Override a field: section.key=value (repeatable)");
  run->add_option("-o,--output", output, "Output directory (overrides experiment.output)");
  run->add_flag("-q,--quiet", quiet, "Do not print the summary table");

  std::string axis;
  std::string values;
  std::string solvers;
  auto* sw = app.add_subcommand("sweep", "Repeat a config over values of eta, m or q");
  sw->add_option("config", config_path, "Experiment config (INI)")->required()->check(CLI::ExistingFile);
  sw->add_option("--axis", axis, "eta | m | q")->required();
  sw->add_option("--values", values, "Comma-separated values, e.g. 1,3,5,10 or 1/L,2/L")->required();
  sw->add_option("--solvers", solvers, "Comma-separated solver names to include (default: all)");
  sw->add_option("--set", overrides, "Override a field: section.key=value (repeatable)");
  sw->add_option("-o,--output", output, "Output directory (overrides experiment.output)");

  std::string directory;
  bool json = false;
  auto* sum = app.add_subcommand("summarize", "Rebuild the comparison table from a result directory");
  sum->add_option("dir", directory, "Directory holding trace CSVs")->required();
  sum->add_flag("--json", json, "Print JSON instead of aligned text");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run || *sw) {
      if (!output.empty()) overrides.push_back("experiment.output=" + output);
      const aaegd::ExperimentConfig cfg = aaegd::load_experiment_config(config_path, overrides);
      if (*run) {
        const auto result = aaegd::run_experiment(cfg);
        if (!quiet) std::cout << result.summary.to_text();
        std::cout << "wrote " << result.trace_files.size() << " traces to " << result.directory.string() << "\n";
      } else {
        const auto result =
            aaegd::sweep(cfg, aaegd::parse_sweep_axis(axis), split_list(values), split_list(solvers));
        std::cout << "wrote " << result.runs.size() << " runs; aggregate " << result.aggregate_file.string() << "\n";
      }
    } else {
      const auto table = aaegd::summarize_directory(directory);
      std::cout << (json ? table.to_json() + "\n" : table.to_text());
    }
  } catch (const aaegd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == aaegd::ErrorKind::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
