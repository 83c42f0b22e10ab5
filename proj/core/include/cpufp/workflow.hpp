#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpufp/preprocess.hpp"
#include "cpufp/refdb.hpp"
#include "cpufp/similarity.hpp"
#include "cpufp/trace_model.hpp"

namespace cpufp {

/// One execution of an application: its knobs and the raw CPU trace.
struct ConfiguredTrace {
  ConfigParams params;
  CpuTimeSeries series;
};

/// Filters and normalizes every run with the database's settings and adds it
/// under `app_id`. Errors carry the offending (app_id, params).
ReferenceDb profile_application(const std::string& app_id, std::span<const ConfiguredTrace> runs,
                                ReferenceDb db);

struct AppScore {
  std::string app_id;
  double corr = 0.0;

  friend bool operator==(const AppScore&, const AppScore&) = default;
};

struct ConfigMatch {
  ConfigParams params;
  std::vector<AppScore> scores;  // descending corr, ties by app id
  std::optional<std::string> winner;

  friend bool operator==(const ConfigMatch&, const ConfigMatch&) = default;
};

struct MatchReport {
  std::vector<ConfigMatch> per_config;  // one per query run, in input order
  std::map<std::string, int> votes;     // every scored app, zero counts included
  std::optional<std::string> verdict;
  double threshold = kDefaultThreshold;

  friend bool operator==(const MatchReport&, const MatchReport&) = default;
};

/// Winner per configuration is the best-correlated app if its corr reaches
/// the threshold. The verdict is the app with most wins; ties go to the
/// higher mean corr over won configurations, then the smaller app id.
///
/// `caller` is the preprocessing the caller asked for, if any; it must equal
/// the database's. Throws EmptyDatabase, PreprocessingMismatch, and
/// preprocessing errors tagged with the query run.
MatchReport match_application(std::span<const ConfiguredTrace> query_runs, const ReferenceDb& db,
                              double threshold = kDefaultThreshold,
                              const std::optional<Preprocessing>& caller = std::nullopt,
                              unsigned threads = 0);

/// Recomputes votes and verdict from per_config winners.
void tally_votes(MatchReport& report);

struct PairComparison {
  double distance = 0.0;
  double corr = 0.0;
  std::size_t path_length = 0;
};

/// Full pipeline on two raw traces; `a` is the query.
PairComparison compare_pair(const CpuTimeSeries& a, const CpuTimeSeries& b, const FilterSpec& spec);

}  // namespace cpufp
