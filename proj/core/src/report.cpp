#include "cpufp/report.hpp"

#include <algorithm>
#include <iterator>

#include <fmt/format.h>

namespace cpufp {

namespace {

std::vector<std::string> row_apps(const MatchReport& report) {
  std::vector<std::string> apps;
  for (const auto& [app, _] : report.votes) apps.push_back(app);
  return apps;
}

std::string params_column(const ConfigParams& p) {
  return fmt::format("M={}, R={}, FS={}M, I={}M", p.mappers, p.reducers, p.fs_split_mb, p.input_mb);
}

}  // namespace

std::string format_percent(double corr) { return fmt::format("{:.4f}", corr * 100.0); }

std::string render_table(const MatchReport& report) {
  const auto apps = row_apps(report);
  std::vector<std::string> header;
  for (const auto& cfg : report.per_config) header.push_back(params_column(cfg.params));

  std::size_t label_width = std::string_view("winner").size();
  for (const auto& a : apps) label_width = std::max(label_width, a.size());

  std::vector<std::vector<std::string>> cells(apps.size() + 1,
                                              std::vector<std::string>(header.size()));
  for (std::size_t c = 0; c < report.per_config.size(); ++c) {
    const auto& cfg = report.per_config[c];
    for (std::size_t r = 0; r < apps.size(); ++r) {
      auto it = std::find_if(cfg.scores.begin(), cfg.scores.end(),
                             [&](const AppScore& s) { return s.app_id == apps[r]; });
      cells[r][c] = it == cfg.scores.end() ? "-" : format_percent(it->corr);
    }
    cells[apps.size()][c] = cfg.winner ? *cfg.winner : "(none)";
  }
  std::vector<std::size_t> widths(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    widths[c] = header[c].size();
    for (const auto& row : cells) widths[c] = std::max(widths[c], row[c].size());
  }

  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "similarity (%) at threshold {}\n", format_percent(report.threshold));
  fmt::format_to(it, "{:<{}}", "", label_width);
  for (std::size_t c = 0; c < header.size(); ++c) fmt::format_to(it, "  {:>{}}", header[c], widths[c]);
  out += '\n';
  for (std::size_t r = 0; r <= apps.size(); ++r) {
    fmt::format_to(it, "{:<{}}", r < apps.size() ? apps[r] : "winner", label_width);
    for (std::size_t c = 0; c < header.size(); ++c) fmt::format_to(it, "  {:>{}}", cells[r][c], widths[c]);
    out += '\n';
  }
  out += "votes:";
  if (report.votes.empty()) out += " (none)";
  for (const auto& [app, count] : report.votes) fmt::format_to(it, " {}={}", app, count);
  out += '\n';
  fmt::format_to(it, "verdict: {}\n", report.verdict ? *report.verdict : "(none)");
  return out;
}

std::string render_machine(const MatchReport& report) {
  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "report version=1 threshold={:.6f} configs={}\n", report.threshold,
                 report.per_config.size());
  for (std::size_t c = 0; c < report.per_config.size(); ++c) {
    const auto& cfg = report.per_config[c];
    fmt::format_to(it, "config index={} mappers={} reducers={} fs_split_mb={} input_mb={} winner={}\n",
                   c, cfg.params.mappers, cfg.params.reducers, cfg.params.fs_split_mb,
                   cfg.params.input_mb, cfg.winner ? *cfg.winner : "-");
    for (std::size_t r = 0; r < cfg.scores.size(); ++r) {
      fmt::format_to(it, "score config={} rank={} app={} corr={:.6f}\n", c, r, cfg.scores[r].app_id,
                     cfg.scores[r].corr);
    }
  }
  for (const auto& [app, count] : report.votes) fmt::format_to(it, "vote app={} count={}\n", app, count);
  fmt::format_to(it, "verdict app={}\n", report.verdict ? *report.verdict : "-");
  return out;
}

}  // namespace cpufp
