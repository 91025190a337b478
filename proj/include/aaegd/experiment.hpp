#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aaegd/diagnostics.hpp"
#include "aaegd/objectives.hpp"
#include "aaegd/trace.hpp"

namespace aaegd {

/// Step size as written in a config: an absolute number, a multiple of 1/L
/// ("9/L"), or the quadratic optimum "2/(L+mu)".
struct StepSpec {
  enum class Kind { Absolute, OverLipschitz, QuadraticOptimal };
  Kind kind = Kind::Absolute;
  double value = 0.0;

  static StepSpec parse(const std::string& text);
  std::string to_string() const;
};

struct ProblemSpec {
  std::string kind;  // quadratic | rosenbrock | logistic | nnls
  Index dim = 100;
  double kappa = 1e3;
  Index samples = 500;
  Index features = 100;
  double mu = 0.0;
  // Synthetic data only. Unset means the scale that makes L = kappa * 2 mu.
  std::optional<double> feature_scale;
  std::optional<std::filesystem::path> dataset;
  std::size_t label_column = 0;
  bool header = false;
  std::optional<std::vector<double>> x0;
};

struct SolverSpec {
  std::string name;
  std::string method;  // gd aegd aa-gd aa-aegd pga apga aegd-prox aa-aegd-prox aa-pga
  StepSpec eta;
  std::size_t m = 5;
  std::size_t q = 5;
  bool q_follows_m = false;
  double beta = 1.0;
  double lambda = 1e-10;
  std::optional<double> c;
  bool replace_auxiliary = true;

  bool uses_anderson() const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  std::filesystem::path output = "results";
  ProblemSpec problem;
  StoppingRule stop;
  std::vector<SolverSpec> solvers;
};

/// INI-style config: sections [experiment], [problem], [stop] and one
/// [solver:<name>] section per solver. Each override is "section.key=value"
/// and replaces or adds that field before interpretation.
ExperimentConfig parse_experiment_config(const std::string& text, const std::vector<std::string>& overrides = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        const std::vector<std::string>& overrides = {});

// Throws ConfigError on the first invalid field.
void validate(const ExperimentConfig& config);

struct ExperimentResult {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> trace_files;
  std::filesystem::path summary_file;
  SummaryTable summary;
};

/// Runs every solver of the config on its problem. Writes one trace CSV per
/// solver plus summary.json and summary.txt into config.output.
ExperimentResult run_experiment(const ExperimentConfig& config);

enum class SweepAxis { Eta, M, Q };
SweepAxis parse_sweep_axis(const std::string& text);

struct SweepResult {
  std::vector<ExperimentResult> runs;
  std::filesystem::path aggregate_file;
};

/// One run_experiment per value, each in <output>/sweep_<axis>/<axis>=<value>,
/// plus <output>/sweep_<axis>.csv with iterations-to-threshold per solver
/// and value. m and q apply to Anderson solvers only; eta applies to all.
/// A non-empty solver filter restricts the run to the named solvers.
SweepResult sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<std::string>& values,
                  const std::vector<std::string>& solver_filter = {});

/// Rebuilds the comparison table from the trace CSVs in a directory, using
/// the reference value recorded in its summary.json when present.
SummaryTable summarize_directory(const std::filesystem::path& directory);

// Name made safe for use as a file stem.
std::string file_stem(const std::string& solver_name);

}  // namespace aaegd
