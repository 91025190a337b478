#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aaegd/anderson.hpp"
#include "aaegd/objectives.hpp"
#include "aaegd/trace.hpp"

namespace aaegd {

/// delta = ||P g_k|| / ||g_k|| where P g_k = g_k - U w, w the regularized
/// least-squares fit of g_k on the columns U_j = g_k - g_j (j older than k).
/// `vectors` runs oldest to newest and the last entry is g_k. P is never
/// formed. With lambda == 0 and a rank-deficient U the minimum-norm fit is
/// used, so delta stays the exact projection ratio.
double projection_gain(std::span<const Vector> vectors, double lambda);

struct GainEntry {
  std::size_t iteration = 0;  // k: compares x_{k+1} against x_k
  bool aa_step = false;
  double delta = 1.0;
  double bound = 0.0;  // delta * (1 - eta mu)
  double observed_ratio = 0.0;
  double slack = 0.0;  // bound - observed_ratio
};

struct IterateBoundEntry {
  std::size_t iteration = 0;  // k + 1
  double distance = 0.0;      // ||x_{k+1} - x*||
  double bound = 0.0;         // prod delta_j (1 - eta mu)^{k+1} (L / mu) ||x_0 - x*||
};

struct GainReport {
  double eta = 0.0;
  double mu = 0.0;
  double L = 0.0;
  bool constants_estimated = false;
  double tolerance = 1e-6;
  std::vector<GainEntry> steps;
  std::vector<IterateBoundEntry> iterate_bounds;

  std::size_t violations() const;
  std::optional<GainEntry> first_step_violation() const;
  std::optional<IterateBoundEntry> first_iterate_violation() const;

  std::string to_json() const;
  std::string to_text() const;
};

/// Per-step gain report for an AA-GD run (beta = 1) on a quadratic.
///
/// Needs a trace recorded with gradients and iterates. Every step k gets
/// delta_k: for mixed steps it is computed from the gradients of the m_k+1
/// window iterates with weight lambda / eta^2, which equals the residual-
/// scale gain of the weights AA actually used since R_j = -eta grad f(x_j);
/// for plain steps delta_k = 1. Rejects eta > 2 / (L + mu).
GainReport gain_report(const ConvergenceTrace& trace, const QuadraticProblem& problem, double eta,
                       const AAConfig& cfg, double tolerance = 1e-6);

/// As gain_report, but throws BoundViolated naming the first offending
/// iteration and its slack.
GainReport verify_aa_gd_gain_bound(const ConvergenceTrace& trace, const QuadraticProblem& problem, double eta,
                                   const AAConfig& cfg, double tolerance = 1e-6);

// --- run comparison --------------------------------------------------------

inline constexpr double kSummaryThresholds[] = {1e-2, 1e-4, 1e-8};

struct SummaryRow {
  std::string name;
  std::string params;
  // Iterations to reach each of kSummaryThresholds; nullopt = not reached.
  std::vector<std::optional<std::size_t>> iters_to;
  double final_value = 0.0;
  std::size_t iterations = 0;
  std::optional<double> aa_accept_rate;  // nullopt when no AA attempted
};

struct SummaryTable {
  std::string problem;
  // "f - f*" when a reference optimum is known, otherwise "step_norm".
  std::string measure;
  std::vector<SummaryRow> rows;

  std::string to_json() const;
  std::string to_text() const;
};

struct NamedTrace {
  std::string name;
  std::string params;
  const ConvergenceTrace* trace;
};

/// Iterations-to-threshold table. With f_star the measure is f(x_k) - f*,
/// otherwise ||x_k - x_{k-1}|| (k >= 1).
SummaryTable summarize(std::span<const NamedTrace> traces, std::optional<double> f_star,
                       const std::string& problem = "");

// First k whose measure falls below threshold.
std::optional<std::size_t> iterations_to(const ConvergenceTrace& trace, double threshold,
                                         std::optional<double> f_star);

}  // namespace aaegd
