#include "cpufp/workflow.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include <fmt/format.h>

#include "cpufp/dtw.hpp"
#include "cpufp/error.hpp"

namespace cpufp {

namespace {

std::string run_label(const std::string& app_id, const ConfigParams& params) {
  return fmt::format("{} ({})", app_id, to_string(params));
}

ConfigMatch match_one(const ConfiguredTrace& run, const ReferenceDb& db, double threshold) {
  ConfigMatch out;
  out.params = run.params;
  CpuTimeSeries query = [&] {
    try {
      return preprocess(run.series, db.preprocessing().filter);
    } catch (const Error& e) {
      throw e.with_context(run_label("query", run.params));
    }
  }();

  for (const auto& ref : db_query(db, run.params)) {
    try {
      const auto alignment = dtw_align(query, ref.series);
      out.scores.push_back({ref.app_id, score(alignment, query, threshold).corr});
    } catch (const Error& e) {
      throw e.with_context(fmt::format("query vs {}", run_label(ref.app_id, ref.params)));
    }
  }
  std::sort(out.scores.begin(), out.scores.end(), [](const AppScore& a, const AppScore& b) {
    if (a.corr != b.corr) return a.corr > b.corr;
    return a.app_id < b.app_id;
  });
  if (!out.scores.empty() && out.scores.front().corr >= threshold) {
    out.winner = out.scores.front().app_id;
  }
  return out;
}

}  // namespace

ReferenceDb profile_application(const std::string& app_id, std::span<const ConfiguredTrace> runs,
                                ReferenceDb db) {
  for (const auto& run : runs) {
    try {
      validate(run.params);
      db.add(ProfileEntry{app_id, run.params, preprocess(run.series, db.preprocessing().filter)});
    } catch (const Error& e) {
      throw e.with_context(run_label(app_id, run.params));
    }
  }
  return db;
}

void tally_votes(MatchReport& report) {
  report.votes.clear();
  for (const auto& cfg : report.per_config) {
    for (const auto& s : cfg.scores) report.votes.emplace(s.app_id, 0);
  }
  std::map<std::string, double> won_corr_sum;
  for (const auto& cfg : report.per_config) {
    if (!cfg.winner) continue;
    ++report.votes[*cfg.winner];
    won_corr_sum[*cfg.winner] += cfg.scores.front().corr;
  }

  report.verdict.reset();
  int best_votes = 0;
  double best_mean = 0.0;
  // std::map iterates in app id order, so on a full tie the first one stays.
  for (const auto& [app, count] : report.votes) {
    if (count == 0) continue;
    const double mean = won_corr_sum[app] / count;
    if (count > best_votes || (count == best_votes && mean > best_mean)) {
      best_votes = count;
      best_mean = mean;
      report.verdict = app;
    }
  }
}

MatchReport match_application(std::span<const ConfiguredTrace> query_runs, const ReferenceDb& db,
                              double threshold, const std::optional<Preprocessing>& caller,
                              unsigned threads) {
  if (db.empty()) throw Error(Errc::EmptyDatabase, "reference database has no entries");
  if (caller && *caller != db.preprocessing()) {
    throw Error(Errc::PreprocessingMismatch,
                fmt::format("requested [{}] but the database was built with [{}]",
                            to_string(*caller), to_string(db.preprocessing())));
  }
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(Errc::InvalidArgument, fmt::format("threshold must lie in (0, 1], got {}", threshold));
  }

  MatchReport report;
  report.threshold = threshold;
  report.per_config.resize(query_runs.size());
  std::vector<std::exception_ptr> failures(query_runs.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, query_runs.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < query_runs.size(); k = next.fetch_add(1)) {
      try {
        report.per_config[k] = match_one(query_runs[k], db, threshold);
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  // Lowest failing index wins, independent of scheduling.
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  tally_votes(report);
  return report;
}

PairComparison compare_pair(const CpuTimeSeries& a, const CpuTimeSeries& b, const FilterSpec& spec) {
  const auto x = preprocess(a, spec);
  const auto y = preprocess(b, spec);
  const auto alignment = dtw_align(x, y);
  return PairComparison{alignment.distance, correlation(x, alignment.expanded_reference),
                        alignment.path.size()};
}

}  // namespace cpufp
