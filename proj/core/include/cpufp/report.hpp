#pragma once

#include <string>

#include "cpufp/workflow.hpp"

namespace cpufp {

/// Apps x configurations grid of corr percentages (four decimals), followed
/// by the per-configuration winners, the vote tally and the verdict.
std::string render_table(const MatchReport& report);

/// Line-oriented key=value records; layout documented in docs/match-report-format.md.
std::string render_machine(const MatchReport& report);

/// corr in percent with four decimals, e.g. 0.943501 -> "94.3501".
std::string format_percent(double corr);

}  // namespace cpufp
