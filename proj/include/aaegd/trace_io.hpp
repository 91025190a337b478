#pragma once

#include <filesystem>
#include <iosfwd>

#include "aaegd/trace.hpp"

namespace aaegd {

inline constexpr const char* kTraceSchema = "aaegd-trace v1";

/// Trace CSV: a "# aaegd-trace v1 method=<name> stop=<reason>" comment line,
/// then the header
///   iteration,f,grad_norm,step_norm,aa_applied,aa_accepted,delta_k,r_min,r_max,time_ms
/// and one row per record. Reals use 17 significant digits; absent optional
/// fields are empty cells; flags are 0/1.
void write_trace_csv(const ConvergenceTrace& trace, std::ostream& out);
void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& path);

ConvergenceTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace aaegd
