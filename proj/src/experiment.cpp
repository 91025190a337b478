#include "aaegd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "aaegd/anderson.hpp"
#include "aaegd/error.hpp"
#include "aaegd/optimizers.hpp"
#include "aaegd/proximal.hpp"
#include "aaegd/trace_io.hpp"

namespace aaegd {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& what) { fail(ErrorKind::ConfigError, what); }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

double to_real(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(trim(text), &used);
    if (used != trim(text).size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    config_error(field + ": '" + text + "' is not a number");
  }
}

std::size_t to_count(const std::string& text, const std::string& field) {
  const double v = to_real(text, field);
  if (v < 0.0 || v != std::floor(v)) config_error(field + ": '" + text + "' is not a nonnegative integer");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  config_error(field + ": '" + text + "' is not a boolean");
}

std::vector<double> to_reals(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(to_real(cell, field));
  if (out.empty()) config_error(field + ": empty list");
  return out;
}

const std::vector<std::string> kMethods = {"gd",  "aegd",      "aa-gd",        "aa-aegd", "pga",
                                           "apga", "aegd-prox", "aa-aegd-prox", "aa-pga"};

bool is_composite_method(const std::string& method) {
  return method == "pga" || method == "apga" || method == "aegd-prox" || method == "aa-aegd-prox" ||
         method == "aa-pga";
}

bool is_composite_kind(const std::string& kind) { return kind == "logistic" || kind == "nnls"; }

void apply_override(pt::ptree& tree, const std::string& entry) {
  const auto eq = entry.find('=');
  if (eq == std::string::npos) config_error("override '" + entry + "' is not section.key=value");
  const std::string key = trim(entry.substr(0, eq));
  const std::string value = trim(entry.substr(eq + 1));
  if (key.find('.') == std::string::npos) config_error("override '" + entry + "' needs a section");
  tree.put(key, value);
}

}  // namespace

// --- step spec -------------------------------------------------------------

StepSpec StepSpec::parse(const std::string& raw) {
  std::string text;
  for (char ch : raw)
    if (ch != ' ' && ch != '\t') text.push_back(ch);
  if (text == "2/(L+mu)") return {Kind::QuadraticOptimal, 2.0};
  if (text.size() > 2 && text.ends_with("/L")) {
    const double mult = to_real(text.substr(0, text.size() - 2), "eta");
    if (!(mult > 0.0)) config_error("eta: multiple of 1/L must be positive");
    return {Kind::OverLipschitz, mult};
  }
  const double v = to_real(text, "eta");
  if (!(v > 0.0)) config_error("eta must be positive");
  return {Kind::Absolute, v};
}

std::string StepSpec::to_string() const {
  std::ostringstream s;
  s << std::setprecision(6);
  switch (kind) {
    case Kind::Absolute: s << value; break;
    case Kind::OverLipschitz: s << value << "/L"; break;
    case Kind::QuadraticOptimal: s << "2/(L+mu)"; break;
  }
  return s.str();
}

bool SolverSpec::uses_anderson() const {
  return method == "aa-gd" || method == "aa-aegd" || method == "aa-aegd-prox" || method == "aa-pga";
}

// --- parsing ---------------------------------------------------------------

ExperimentConfig parse_experiment_config(const std::string& text, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    config_error(std::string("malformed config: ") + e.what());
  }
  for (const auto& o : overrides) apply_override(tree, o);

  ExperimentConfig cfg;
  if (const auto exp = tree.get_child_optional("experiment")) {
    for (const auto& [key, node] : *exp) {
      const std::string v = node.data();
      const std::string field = "experiment." + key;
      if (key == "name") cfg.name = trim(v);
      else if (key == "seed") cfg.seed = to_count(v, field);
      else if (key == "output") cfg.output = trim(v);
      else config_error("unknown field " + field);
    }
  }

  const auto problem = tree.get_child_optional("problem");
  if (!problem) config_error("missing [problem] section");
  for (const auto& [key, node] : *problem) {
    const std::string v = node.data();
    const std::string field = "problem." + key;
    auto& p = cfg.problem;
    if (key == "kind") p.kind = trim(v);
    else if (key == "dim") p.dim = static_cast<Index>(to_count(v, field));
    else if (key == "kappa") p.kappa = to_real(v, field);
    else if (key == "samples") p.samples = static_cast<Index>(to_count(v, field));
    else if (key == "features") p.features = static_cast<Index>(to_count(v, field));
    else if (key == "mu") p.mu = to_real(v, field);
    else if (key == "feature_scale") p.feature_scale = to_real(v, field);
    else if (key == "dataset") p.dataset = fs::path(trim(v));
    else if (key == "label_column") p.label_column = to_count(v, field);
    else if (key == "header") p.header = to_bool(v, field);
    else if (key == "x0") p.x0 = to_reals(v, field);
    else config_error("unknown field " + field);
  }

  if (const auto stop = tree.get_child_optional("stop")) {
    for (const auto& [key, node] : *stop) {
      const std::string v = trim(node.data());
      const std::string field = "stop." + key;
      auto& s = cfg.stop;
      if (key == "max_iterations") {
        s.max_iterations = to_count(v, field);
      } else if (key == "gradient_tolerance") {
        if (v == "off") s.check_gradient = false;
        else if (v != "default") s.gradient_tolerance = to_real(v, field);
      } else if (key == "value_threshold") {
        s.value_threshold = to_real(v, field);
      } else if (key == "step_tolerance") {
        s.step_tolerance = to_real(v, field);
      } else {
        config_error("unknown field " + field);
      }
    }
  }

  for (const auto& [section, body] : tree) {
    if (!section.starts_with("solver:")) {
      if (section != "experiment" && section != "problem" && section != "stop")
        config_error("unknown section [" + section + "]");
      continue;
    }
    SolverSpec s;
    s.name = trim(section.substr(7));
    if (s.name.empty()) config_error("solver section without a name");
    bool has_eta = false;
    bool has_q = false;
    for (const auto& [key, node] : body) {
      const std::string v = trim(node.data());
      const std::string field = section + "." + key;
      if (key == "method") {
        s.method = v;
      } else if (key == "eta") {
        s.eta = StepSpec::parse(v);
        has_eta = true;
      } else if (key == "m") {
        s.m = to_count(v, field);
      } else if (key == "q") {
        has_q = true;
        if (v == "m") s.q_follows_m = true;
        else if (v == "never") s.q = AAConfig::kNever;
        else s.q = to_count(v, field);
      } else if (key == "beta") {
        s.beta = to_real(v, field);
      } else if (key == "lambda") {
        s.lambda = to_real(v, field);
      } else if (key == "c") {
        s.c = to_real(v, field);
      } else if (key == "replace_auxiliary") {
        s.replace_auxiliary = to_bool(v, field);
      } else {
        config_error("unknown field " + field);
      }
    }
    if (!has_eta) config_error(section + ".eta is required");
    if (!has_q) s.q_follows_m = true;
    if (s.q_follows_m) s.q = s.m;
    cfg.solvers.push_back(std::move(s));
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), overrides);
}

void validate(const ExperimentConfig& cfg) {
  const auto& p = cfg.problem;
  const std::vector<std::string> kinds = {"quadratic", "rosenbrock", "logistic", "nnls"};
  if (std::find(kinds.begin(), kinds.end(), p.kind) == kinds.end())
    config_error("problem.kind must be one of quadratic, rosenbrock, logistic, nnls");
  if (p.kind == "quadratic") {
    if (p.dim < 2) config_error("problem.dim must be at least 2");
    if (!(p.kappa > 1.0)) config_error("problem.kappa must exceed 1");
  }
  if (is_composite_kind(p.kind)) {
    if (p.dataset) {
      if (!fs::exists(*p.dataset)) config_error("dataset file not found: " + p.dataset->string());
    } else {
      if (p.samples < 1 || p.features < 1 || p.samples < p.features)
        config_error("problem.samples must be >= problem.features >= 1");
      if (!(p.kappa > 1.0)) config_error("problem.kappa must exceed 1");
      if (p.feature_scale && !(*p.feature_scale > 0.0)) config_error("problem.feature_scale must be positive");
      if (!p.feature_scale && !(p.mu > 0.0))
        config_error("problem.feature_scale is required when problem.mu is zero");
    }
    if (p.mu < 0.0) config_error("problem.mu must be nonnegative");
  }
  if (p.x0) {
    if (p.kind == "rosenbrock" && p.x0->size() != 2) config_error("problem.x0 must have 2 entries");
    if (p.kind == "quadratic" && static_cast<Index>(p.x0->size()) != p.dim)
      config_error("problem.x0 length differs from problem.dim");
  }
  if (cfg.solvers.empty()) config_error("no [solver:<name>] sections");
  std::vector<std::string> names;
  for (const auto& s : cfg.solvers) {
    if (std::find(names.begin(), names.end(), s.name) != names.end()) config_error("duplicate solver " + s.name);
    names.push_back(s.name);
    if (std::find(kMethods.begin(), kMethods.end(), s.method) == kMethods.end())
      config_error("solver:" + s.name + ".method '" + s.method + "' is unknown");
    if (is_composite_kind(p.kind) != is_composite_method(s.method))
      config_error("solver:" + s.name + ".method '" + s.method + "' does not fit problem kind " + p.kind);
    if (s.eta.kind == StepSpec::Kind::QuadraticOptimal && p.kind != "quadratic")
      config_error("solver:" + s.name + ".eta = 2/(L+mu) needs a quadratic problem");
    if (s.eta.kind == StepSpec::Kind::OverLipschitz && p.kind == "rosenbrock")
      config_error("solver:" + s.name + ".eta: rosenbrock has no Lipschitz estimate, give an absolute step");
    if (s.uses_anderson()) {
      try {
        AAConfig{s.m, s.q, s.beta, s.lambda}.validate();
      } catch (const Error& e) {
        config_error("solver:" + s.name + ": " + e.what());
      }
    }
  }
}

// --- running ---------------------------------------------------------------

namespace {

struct BuiltProblem {
  std::optional<ObjectiveFunction> smooth;
  std::optional<CompositeProblem> composite;
  std::optional<QuadraticProblem> quadratic;
  Vector x0;
  std::optional<double> f_star;
  double lipschitz = 0.0;
  std::string description;
};

BuiltProblem build_problem(const ExperimentConfig& cfg) {
  const auto& p = cfg.problem;
  BuiltProblem out;
  std::ostringstream desc;
  if (p.kind == "quadratic") {
    out.quadratic = make_quadratic(p.dim, p.kappa, cfg.seed);
    out.smooth = out.quadratic->objective();
    out.f_star = out.quadratic->min_value();
    out.lipschitz = out.quadratic->bounds.L;
    out.x0 = Vector::Zero(p.dim);
    desc << "quadratic dim=" << p.dim << " kappa=" << p.kappa << " seed=" << cfg.seed;
  } else if (p.kind == "rosenbrock") {
    out.smooth = rosenbrock_2d();
    out.f_star = 0.0;
    out.x0 = Vector(2);
    out.x0 << 1.5, -0.5;
    desc << "rosenbrock";
  } else {
    Dataset data;
    if (p.dataset) {
      data = load_csv_dataset(*p.dataset, p.label_column, p.header);
      desc << p.kind << " dataset=" << p.dataset->string();
    } else {
      const bool logistic = p.kind == "logistic";
      const double scale = p.feature_scale ? *p.feature_scale
                                           : (logistic ? logistic_feature_scale(p.kappa, p.mu)
                                                       : nnls_feature_scale(p.kappa, p.mu));
      data = logistic ? make_synthetic_classification(p.samples, p.features, p.kappa, cfg.seed, scale)
                      : make_synthetic_regression(p.samples, p.features, p.kappa, cfg.seed, scale);
      desc << p.kind << " synthetic M=" << p.samples << " n=" << p.features << " kappa=" << p.kappa
           << " scale=" << scale << " seed=" << cfg.seed;
    }
    desc << " mu=" << p.mu;
    out.composite = p.kind == "logistic" ? make_logistic(data.features, data.targets, p.mu)
                                         : make_nnls(data.features, data.targets, p.mu);
    out.lipschitz = out.composite->lipschitz;
    out.x0 = Vector::Zero(data.features.cols());
  }
  if (p.x0) {
    const Vector given = Eigen::Map<const Vector>(p.x0->data(), static_cast<Index>(p.x0->size()));
    if (given.size() != out.x0.size()) config_error("problem.x0 has the wrong length");
    out.x0 = given;
  }
  out.description = desc.str();
  return out;
}

double resolve_eta(const StepSpec& spec, const BuiltProblem& built) {
  switch (spec.kind) {
    case StepSpec::Kind::Absolute: return spec.value;
    case StepSpec::Kind::OverLipschitz: return spec.value / built.lipschitz;
    case StepSpec::Kind::QuadraticOptimal: return built.quadratic->bounds.optimal_gd_step();
  }
  return spec.value;
}

std::string describe(const SolverSpec& s, double eta) {
  std::ostringstream out;
  out << "method=" << s.method << " eta=" << s.eta.to_string();
  if (s.eta.kind != StepSpec::Kind::Absolute) out << " (" << std::setprecision(6) << eta << ")";
  if (s.uses_anderson()) {
    out << " m=" << s.m << " q=" << (s.q == AAConfig::kNever ? std::string("never") : std::to_string(s.q))
        << " beta=" << s.beta << " lambda=" << s.lambda;
  }
  if (s.c) out << " c=" << *s.c;
  return out.str();
}

ConvergenceTrace run_solver(const SolverSpec& s, const BuiltProblem& built, const StoppingRule& stop) {
  const double eta = resolve_eta(s.eta, built);
  const AAConfig aa{s.m, s.q, s.beta, s.lambda};
  ConvergenceTrace trace;
  if (built.composite) {
    CompositeProblem problem = *built.composite;
    if (s.c) problem.smooth = problem.smooth.with_shift(*s.c);
    const GuardedAAOptions guard{s.replace_auxiliary};
    if (s.method == "pga") trace = run_pga(problem, built.x0, eta, stop);
    else if (s.method == "apga") trace = run_apga(problem, built.x0, eta, stop);
    else if (s.method == "aegd-prox") trace = run_aa_aegd_prox(problem, built.x0, eta, AAConfig::disabled(), stop, {}, guard);
    else if (s.method == "aa-aegd-prox") trace = run_aa_aegd_prox(problem, built.x0, eta, aa, stop, {}, guard);
    else trace = run_aa_pga(problem, built.x0, eta, aa, stop, {}, guard);
  } else {
    ObjectiveFunction f = *built.smooth;
    if (s.c) f = f.with_shift(*s.c);
    if (s.method == "gd") trace = run_optimizer(Method::GD, f, built.x0, eta, stop);
    else if (s.method == "aegd") trace = run_optimizer(Method::AEGD, f, built.x0, eta, stop);
    else if (s.method == "aa-gd") trace = run_aa(Method::GD, f, built.x0, eta, aa, stop);
    else trace = run_aa(Method::AEGD, f, built.x0, eta, aa, stop);
  }
  trace.method = s.name;
  return trace;
}

fs::path output_directory(const ExperimentConfig& cfg) {
  if (const char* root = std::getenv("AAEGD_OUTPUT_ROOT"); root != nullptr && *root != '\0')
    return fs::path(root) / cfg.name;
  return cfg.output;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace

std::string file_stem(const std::string& solver_name) {
  std::string out;
  for (char ch : solver_name) {
    const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.';
    out.push_back(keep ? ch : '_');
  }
  return out.empty() ? std::string("solver") : out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const BuiltProblem built = build_problem(config);

  ExperimentResult result;
  result.directory = output_directory(config);
  std::error_code ec;
  fs::create_directories(result.directory, ec);
  if (ec || !fs::is_directory(result.directory))
    fail(ErrorKind::IoError, "cannot create output directory " + result.directory.string());

  std::vector<ConvergenceTrace> traces;
  std::vector<std::string> params;
  for (const auto& s : config.solvers) {
    traces.push_back(run_solver(s, built, config.stop));
    params.push_back(describe(s, resolve_eta(s.eta, built)));
    const fs::path file = result.directory / (file_stem(s.name) + ".csv");
    write_trace_csv(traces.back(), file);
    result.trace_files.push_back(file);
  }

  std::vector<NamedTrace> named;
  for (std::size_t i = 0; i < traces.size(); ++i) named.push_back({config.solvers[i].name, params[i], &traces[i]});
  result.summary = summarize(named, built.f_star, built.description);

  auto json = nlohmann::json::parse(result.summary.to_json());
  json["f_star"] = built.f_star ? nlohmann::json(*built.f_star) : nlohmann::json(nullptr);
  result.summary_file = result.directory / "summary.json";
  write_text(result.summary_file, json.dump(2) + "\n");
  write_text(result.directory / "summary.txt", result.summary.to_text());
  return result;
}

SweepAxis parse_sweep_axis(const std::string& text) {
  if (text == "eta") return SweepAxis::Eta;
  if (text == "m") return SweepAxis::M;
  if (text == "q") return SweepAxis::Q;
  config_error("sweep axis must be eta, m or q, got \"" + text + "\"");
}

SweepResult sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<std::string>& values,
                  const std::vector<std::string>& solver_filter) {
  if (values.empty()) config_error("sweep needs at least one value");
  const std::string axis_name = axis == SweepAxis::Eta ? "eta" : axis == SweepAxis::M ? "m" : "q";

  ExperimentConfig base = config;
  if (!solver_filter.empty()) {
    std::vector<SolverSpec> kept;
    for (const auto& s : base.solvers)
      if (std::find(solver_filter.begin(), solver_filter.end(), s.name) != solver_filter.end()) kept.push_back(s);
    if (kept.size() != solver_filter.size()) config_error("sweep solver filter names an unknown solver");
    base.solvers = std::move(kept);
  }
  validate(base);

  SweepResult result;
  const fs::path root = output_directory(base);
  std::ostringstream aggregate;
  aggregate << "# " << kTraceSchema << " sweep axis=" << axis_name << "\n";
  aggregate << axis_name << ",solver,iters_1e-2,iters_1e-4,iters_1e-8,final_f,aa_accept_rate\n";

  for (const auto& value : values) {
    ExperimentConfig run = base;
    run.output = root / ("sweep_" + axis_name) / (axis_name + "=" + file_stem(value));
    run.name = base.name + "/sweep_" + axis_name + "/" + axis_name + "=" + file_stem(value);
    for (auto& s : run.solvers) {
      switch (axis) {
        case SweepAxis::Eta: s.eta = StepSpec::parse(value); break;
        case SweepAxis::M:
          if (!s.uses_anderson()) break;
          s.m = to_count(value, "m");
          if (s.q_follows_m) s.q = s.m;
          break;
        case SweepAxis::Q:
          if (!s.uses_anderson()) break;
          s.q = value == "never" ? AAConfig::kNever : to_count(value, "q");
          s.q_follows_m = false;
          break;
      }
    }
    ExperimentResult r = run_experiment(run);
    for (const auto& row : r.summary.rows) {
      aggregate << value << ',' << row.name;
      for (const auto& it : row.iters_to) aggregate << ',' << (it ? std::to_string(*it) : std::string());
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", row.final_value);
      aggregate << ',' << buf << ',';
      if (row.aa_accept_rate) {
        std::snprintf(buf, sizeof buf, "%.6g", *row.aa_accept_rate);
        aggregate << buf;
      }
      aggregate << '\n';
    }
    result.runs.push_back(std::move(r));
  }
  result.aggregate_file = root / ("sweep_" + axis_name + ".csv");
  write_text(result.aggregate_file, aggregate.str());
  return result;
}

SummaryTable summarize_directory(const fs::path& directory) {
  if (!fs::is_directory(directory)) fail(ErrorKind::IoError, directory.string() + " is not a directory");
  std::optional<double> f_star;
  std::string problem;
  std::vector<std::pair<std::string, std::string>> order;  // name, params from summary.json
  const fs::path summary = directory / "summary.json";
  if (fs::exists(summary)) {
    std::ifstream in(summary);
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (!j.is_discarded()) {
      if (j.contains("f_star") && j["f_star"].is_number()) f_star = j["f_star"].get<double>();
      if (j.contains("problem") && j["problem"].is_string()) problem = j["problem"].get<std::string>();
      if (j.contains("solvers"))
        for (const auto& s : j["solvers"]) order.emplace_back(s.value("name", ""), s.value("params", ""));
    }
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory))
    if (entry.is_regular_file() && entry.path().extension() == ".csv" &&
        !entry.path().filename().string().starts_with("sweep_"))
      files.push_back(entry.path());
  // Solvers listed in summary.json keep their run order; others follow by name.
  const auto rank = [&](const fs::path& f) {
    for (std::size_t i = 0; i < order.size(); ++i)
      if (file_stem(order[i].first) == f.stem().string()) return i;
    return order.size();
  };
  std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) {
    const std::size_t ra = rank(a);
    const std::size_t rb = rank(b);
    return ra != rb ? ra < rb : a < b;
  });
  if (files.empty()) fail(ErrorKind::IoError, "no trace files in " + directory.string());

  std::vector<ConvergenceTrace> traces;
  for (const auto& f : files) traces.push_back(read_trace_csv(f));
  std::vector<NamedTrace> named;
  for (const auto& t : traces) {
    std::string params;
    for (const auto& [n, p] : order)
      if (n == t.method) params = p;
    named.push_back({t.method, params, &t});
  }
  return summarize(named, f_star, problem);
}

}  // namespace aaegd
