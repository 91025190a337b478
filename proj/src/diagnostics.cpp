#include "aaegd/diagnostics.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "aaegd/error.hpp"

namespace aaegd {

double projection_gain(std::span<const Vector> vectors, double lambda) {
  require(!vectors.empty(), ErrorKind::InvalidArgument, "projection_gain needs at least one vector");
  require(lambda >= 0.0, ErrorKind::InvalidArgument, "lambda must be nonnegative");
  const Vector& g = vectors.back();
  const double g_norm = g.norm();
  if (g_norm == 0.0) fail(ErrorKind::ZeroGradient, "current gradient is zero");
  if (vectors.size() == 1) return 1.0;

  const auto cols = static_cast<Index>(vectors.size() - 1);
  Matrix u(g.size(), cols);
  for (Index j = 0; j < cols; ++j) {
    require(vectors[static_cast<std::size_t>(j)].size() == g.size(), ErrorKind::DimensionMismatch,
            "gradient window has mixed lengths");
    u.col(j) = g - vectors[static_cast<std::size_t>(j)];
  }
  if (u.norm() == 0.0) return 1.0;

  Vector w;
  try {
    w = solve_regularized_ls(u, g, lambda);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularSystem) throw;
    w = u.completeOrthogonalDecomposition().solve(g);
  }
  return (g - u * w).norm() / g_norm;
}

// --- gain report -----------------------------------------------------------

std::size_t GainReport::violations() const {
  std::size_t count = 0;
  for (const auto& s : steps)
    if (s.observed_ratio > s.bound * (1.0 + tolerance)) ++count;
  for (const auto& b : iterate_bounds)
    if (b.distance > b.bound * (1.0 + tolerance)) ++count;
  return count;
}

std::optional<GainEntry> GainReport::first_step_violation() const {
  for (const auto& s : steps)
    if (s.observed_ratio > s.bound * (1.0 + tolerance)) return s;
  return std::nullopt;
}

std::optional<IterateBoundEntry> GainReport::first_iterate_violation() const {
  for (const auto& b : iterate_bounds)
    if (b.distance > b.bound * (1.0 + tolerance)) return b;
  return std::nullopt;
}

std::string GainReport::to_json() const {
  nlohmann::json j;
  j["eta"] = eta;
  j["mu"] = mu;
  j["L"] = L;
  j["constants"] = constants_estimated ? "estimated" : "exact";
  j["tolerance"] = tolerance;
  j["violations"] = violations();
  auto& arr = j["steps"] = nlohmann::json::array();
  for (const auto& s : steps)
    arr.push_back({{"iteration", s.iteration},
                   {"aa_step", s.aa_step},
                   {"delta", s.delta},
                   {"bound", s.bound},
                   {"observed_ratio", s.observed_ratio},
                   {"slack", s.slack}});
  auto& it = j["iterate_bounds"] = nlohmann::json::array();
  for (const auto& b : iterate_bounds)
    it.push_back({{"iteration", b.iteration}, {"distance", b.distance}, {"bound", b.bound}});
  return j.dump(2);
}

std::string GainReport::to_text() const {
  std::ostringstream out;
  out << "eta=" << eta << " mu=" << mu << " L=" << L << (constants_estimated ? " (estimated)" : "") << "\n";
  out << std::setw(8) << "k" << std::setw(5) << "AA" << std::setw(14) << "delta" << std::setw(14) << "bound"
      << std::setw(14) << "observed" << std::setw(14) << "slack" << "\n";
  out << std::scientific << std::setprecision(5);
  for (const auto& s : steps)
    out << std::setw(8) << s.iteration << std::setw(5) << (s.aa_step ? "y" : "n") << std::setw(14) << s.delta
        << std::setw(14) << s.bound << std::setw(14) << s.observed_ratio << std::setw(14) << s.slack << "\n";
  out << "violations: " << violations() << "\n";
  return out.str();
}

GainReport gain_report(const ConvergenceTrace& trace, const QuadraticProblem& problem, double eta,
                       const AAConfig& cfg, double tolerance) {
  const std::size_t n = trace.records.size();
  require(trace.gradients.size() == n && trace.iterates.size() == n, ErrorKind::InvalidArgument,
          "gain report needs a trace recorded with gradients and iterates");
  require(n >= 1, ErrorKind::InvalidArgument, "empty trace");
  require(eta > 0.0, ErrorKind::InvalidArgument, "step size must be positive");
  const double mu = problem.bounds.mu;
  const double L = problem.bounds.L;
  require(eta <= 2.0 / (L + mu) * (1.0 + 1e-12), ErrorKind::InvalidArgument,
          "gain bound requires eta <= 2 / (L + mu)");

  GainReport report;
  report.eta = eta;
  report.mu = mu;
  report.L = L;
  report.tolerance = tolerance;

  const double contraction = 1.0 - eta * mu;
  const double gradient_lambda = cfg.lambda / (eta * eta);
  const double d0 = (trace.iterates.front() - problem.minimizer).norm();
  double log_delta_product = 0.0;
  bool zero_product = false;

  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double gk = trace.gradients[k].norm();
    if (gk == 0.0) break;
    GainEntry entry;
    entry.iteration = k;
    entry.aa_step = trace.records[k + 1].aa_applied;
    if (entry.aa_step) {
      const std::size_t mk = std::min(cfg.m, k);
      entry.delta = projection_gain(std::span(trace.gradients).subspan(k - mk, mk + 1), gradient_lambda);
    }
    entry.bound = entry.delta * contraction;
    entry.observed_ratio = trace.gradients[k + 1].norm() / gk;
    entry.slack = entry.bound - entry.observed_ratio;
    report.steps.push_back(entry);

    if (entry.delta == 0.0)
      zero_product = true;
    else
      log_delta_product += std::log(entry.delta);
    IterateBoundEntry ib;
    ib.iteration = k + 1;
    ib.distance = (trace.iterates[k + 1] - problem.minimizer).norm();
    ib.bound = zero_product ? 0.0
                            : std::exp(log_delta_product + static_cast<double>(k + 1) * std::log(contraction)) *
                                  (L / mu) * d0;
    report.iterate_bounds.push_back(ib);
  }
  return report;
}

GainReport verify_aa_gd_gain_bound(const ConvergenceTrace& trace, const QuadraticProblem& problem, double eta,
                                   const AAConfig& cfg, double tolerance) {
  GainReport report = gain_report(trace, problem, eta, cfg, tolerance);
  if (const auto bad = report.first_step_violation()) {
    fail(ErrorKind::BoundViolated, "per-step gain bound fails at iteration " + std::to_string(bad->iteration) +
                                       " (slack " + std::to_string(bad->slack) + ")");
  }
  if (const auto bad = report.first_iterate_violation()) {
    fail(ErrorKind::BoundViolated, "iterate bound fails at iteration " + std::to_string(bad->iteration) +
                                       " (slack " + std::to_string(bad->bound - bad->distance) + ")");
  }
  return report;
}

// --- summary ---------------------------------------------------------------

std::optional<std::size_t> iterations_to(const ConvergenceTrace& trace, double threshold,
                                         std::optional<double> f_star) {
  for (const auto& rec : trace.records) {
    if (f_star) {
      if (rec.value - *f_star < threshold) return rec.iteration;
    } else if (rec.iteration >= 1 && rec.step_norm <= threshold) {
      return rec.iteration;
    }
  }
  return std::nullopt;
}

SummaryTable summarize(std::span<const NamedTrace> traces, std::optional<double> f_star, const std::string& problem) {
  require(!traces.empty(), ErrorKind::InvalidArgument, "nothing to summarize");
  SummaryTable table;
  table.problem = problem;
  table.measure = f_star ? "f - f*" : "step_norm";
  for (const auto& named : traces) {
    require(named.trace != nullptr && !named.trace->records.empty(), ErrorKind::InvalidArgument,
            "summary needs non-empty traces");
    const ConvergenceTrace& t = *named.trace;
    SummaryRow row;
    row.name = named.name.empty() ? t.method : named.name;
    row.params = named.params;
    for (double threshold : kSummaryThresholds) row.iters_to.push_back(iterations_to(t, threshold, f_star));
    row.final_value = t.last().value;
    row.iterations = t.iterations();
    if (const std::size_t attempts = t.aa_attempts(); attempts > 0)
      row.aa_accept_rate = static_cast<double>(t.aa_accepts()) / static_cast<double>(attempts);
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

std::string threshold_key(std::size_t i) {
  static constexpr const char* kKeys[] = {"1e-2", "1e-4", "1e-8"};
  return kKeys[i];
}

}  // namespace

std::string SummaryTable::to_json() const {
  nlohmann::json j;
  j["problem"] = problem;
  j["measure"] = measure;
  auto& solvers = j["solvers"] = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json iters;
    for (std::size_t i = 0; i < row.iters_to.size(); ++i) {
      const auto& v = row.iters_to[i];
      iters[threshold_key(i)] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    }
    solvers.push_back({{"name", row.name},
                       {"params", row.params},
                       {"iters_to", iters},
                       {"final_f", row.final_value},
                       {"iterations", row.iterations},
                       {"aa_accept_rate", row.aa_accept_rate ? nlohmann::json(*row.aa_accept_rate)
                                                             : nlohmann::json(nullptr)}});
  }
  return j.dump(2);
}

std::string SummaryTable::to_text() const {
  std::ostringstream out;
  if (!problem.empty()) out << "problem: " << problem << "\n";
  out << "measure: " << measure << "\n";
  out << std::left << std::setw(16) << "solver" << std::right;
  for (std::size_t i = 0; i < std::size(kSummaryThresholds); ++i) out << std::setw(12) << threshold_key(i);
  out << std::setw(16) << "final_f" << std::setw(10) << "aa_rate" << "\n";
  for (const auto& row : rows) {
    out << std::left << std::setw(16) << row.name << std::right;
    for (const auto& v : row.iters_to) out << std::setw(12) << (v ? std::to_string(*v) : std::string("-"));
    std::ostringstream f;
    f << std::scientific << std::setprecision(6) << row.final_value;
    out << std::setw(16) << f.str();
    std::ostringstream r;
    if (row.aa_accept_rate)
      r << std::fixed << std::setprecision(3) << *row.aa_accept_rate;
    else
      r << "-";
    out << std::setw(10) << r.str() << "\n";
  }
  out << "(- = not reached)\n";
  return out.str();
}

}  // namespace aaegd
