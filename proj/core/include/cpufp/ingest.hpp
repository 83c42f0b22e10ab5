#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpufp/trace_model.hpp"

namespace cpufp {

/// One "all CPUs" row of sar -u output.
struct SarRecord {
  std::string timestamp;  // as found in the log, e.g. "00:19:01"
  double user_pct = 0.0;
  double system_pct = 0.0;
  double iowait_pct = 0.0;
  double steal_pct = 0.0;
  double idle_pct = 0.0;
  // Largest number of decimals among the numeric fields of the row.
  int decimals = 2;
};

/// Which sar column(s) make up one utilization sample.
enum class UtilizationMetric {
  BusyTotal,       // 100 - %idle
  UserPlusSystem,  // %user + %system
  UserOnly,        // %user
};

std::string_view metric_name(UtilizationMetric metric) noexcept;  // busy|usersys|user
std::optional<UtilizationMetric> parse_metric(std::string_view name) noexcept;

/// Sample value of `record` under `metric`, rounded to the row's decimal
/// precision and clamped to [0, 100].
double utilization(const SarRecord& record, UtilizationMetric metric);

/// Valid data rows of a sar text log, in file order. Header lines, per-CPU
/// rows, "Average:" footers and rows with missing fields are skipped.
/// Column order comes from the last header seen (%user %system ... %idle);
/// without one the five-column layout user/system/iowait/steal/idle is assumed.
/// Throws NonMonotonicTimestamps when a timestamp goes backwards by less
/// than twelve hours (a backwards jump of twelve hours or more is read as a
/// midnight crossing).
std::vector<SarRecord> parse_sar_records(std::istream& text);

/// Raw series, one sample per valid row. The interval is the gap between the
/// first two rows (1 s when there is a single row). Throws EmptyTrace when no
/// data rows exist.
CpuTimeSeries parse_sar(std::istream& text,
                        UtilizationMetric metric = UtilizationMetric::BusyTotal,
                        std::string source = "sar");

/// One value per line with an optional leading header line. LF or CRLF.
/// Throws MalformedLine(line) for a non-numeric line after the header slot,
/// EmptyTrace when no values exist.
CpuTimeSeries parse_csv(std::istream& text, double sample_interval = 1.0,
                        std::string source = "csv");

/// Sniffs the content: anything mentioning "%idle" is parsed as sar,
/// everything else as CSV.
CpuTimeSeries parse_trace(std::istream& text, UtilizationMetric metric,
                          std::string source);

/// Reads and parses a trace file. Throws Error(Io) when unreadable.
CpuTimeSeries load_trace_file(const std::string& path, UtilizationMetric metric);

}  // namespace cpufp
