#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gsgdm/types.hpp"

namespace gsgdm {

inline constexpr std::string_view kTraceHeader =
    "k,f_x,f_w,f_y,grad_sq,m_sq,phi,varphi,bound,resid_w,resid_v";

/// `value` with 17 significant digits (%.17g); non-finite values print as nan/inf.
std::string format_real(double value);

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows);
std::vector<TraceRow> read_trace_csv(std::istream& in);

/// Column-wise arithmetic mean over runs, truncated to the shortest run.
/// An optional column is present in the mean only when every run has it.
std::vector<TraceRow> mean_trace(std::span<const std::vector<TraceRow>> runs);

}  // namespace gsgdm
