#include "aaegd/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aaegd/error.hpp"

namespace aaegd {

std::vector<std::size_t> ConvergenceTrace::aa_iterations() const {
  std::vector<std::size_t> out;
  for (const auto& rec : records)
    if (rec.aa_applied) out.push_back(rec.iteration - 1);
  return out;
}

std::size_t ConvergenceTrace::aa_attempts() const {
  std::size_t n = 0;
  for (const auto& rec : records) n += rec.aa_applied ? 1 : 0;
  return n;
}

std::size_t ConvergenceTrace::aa_accepts() const {
  std::size_t n = 0;
  for (const auto& rec : records) n += (rec.aa_applied && rec.aa_accepted.value_or(true)) ? 1 : 0;
  return n;
}

namespace {

constexpr const char* kHeader = "iteration,f,grad_norm,step_norm,aa_applied,aa_accepted,delta_k,r_min,r_max,time_ms";

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_real(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::ParseError, "trace line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

std::optional<double> parse_optional(const std::string& s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  return parse_real(s, line);
}

std::string meta_value(const std::string& comment, const std::string& key) {
  const auto pos = comment.find(key + "=");
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size() + 1;
  const auto end = comment.find(' ', start);
  return comment.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

void write_trace_csv(const ConvergenceTrace& trace, std::ostream& out) {
  out << "# " << kTraceSchema << " method=" << trace.method << " stop=" << trace.stop_reason << "\n";
  out << kHeader << "\n";
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << format_real(r.value) << ',' << format_real(r.gradient_norm) << ','
        << format_real(r.step_norm) << ',' << (r.aa_applied ? 1 : 0) << ','
        << (r.aa_accepted ? (*r.aa_accepted ? "1" : "0") : "") << ',' << format_optional(r.delta) << ','
        << format_optional(r.r_min) << ',' << format_optional(r.r_max) << ',' << format_real(r.time_ms) << '\n';
  }
}

void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
  write_trace_csv(trace, out);
  if (!out) fail(ErrorKind::IoError, "write failed for " + path.string());
}

ConvergenceTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
  ConvergenceTrace trace;
  std::string line;
  std::size_t line_no = 0;
  bool seen_schema = false;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.find(kTraceSchema) != std::string::npos) {
        seen_schema = true;
        trace.method = meta_value(line, "method");
        trace.stop_reason = meta_value(line, "stop");
      }
      continue;
    }
    if (!seen_header) {
      if (line != kHeader) fail(ErrorKind::ParseError, path.string() + ": unexpected trace header");
      seen_header = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != 10)
      fail(ErrorKind::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected 10 columns");
    IterationRecord r;
    r.iteration = static_cast<std::size_t>(parse_real(cells[0], line_no));
    r.value = parse_real(cells[1], line_no);
    r.gradient_norm = parse_real(cells[2], line_no);
    r.step_norm = parse_real(cells[3], line_no);
    r.aa_applied = cells[4] == "1";
    if (!cells[5].empty()) r.aa_accepted = cells[5] == "1";
    r.delta = parse_optional(cells[6], line_no);
    r.r_min = parse_optional(cells[7], line_no);
    r.r_max = parse_optional(cells[8], line_no);
    r.time_ms = parse_real(cells[9], line_no);
    trace.records.push_back(r);
  }
  if (!seen_schema) fail(ErrorKind::ParseError, path.string() + ": missing schema comment");
  if (trace.records.empty()) fail(ErrorKind::ParseError, path.string() + ": no records");
  return trace;
}

}  // namespace aaegd
