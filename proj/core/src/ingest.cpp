#include "cpufp/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "cpufp/error.hpp"

namespace cpufp {

namespace {

constexpr int kSecondsPerDay = 24 * 60 * 60;
constexpr int kMidnightJump = kSecondsPerDay / 2;

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Number {
  double value;
  int decimals;
};

// Locale-free decimal parse; a comma decimal separator is accepted.
std::optional<Number> parse_number(std::string_view token) {
  std::string buf(token);
  std::replace(buf.begin(), buf.end(), ',', '.');
  if (buf.empty()) return std::nullopt;
  const char* first = buf.data();
  const char* last = buf.data() + buf.size();
  if (*first == '+') ++first;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  int decimals = 0;
  if (auto dot = buf.find('.'); dot != std::string::npos) {
    const auto exp = buf.find_first_of("eE");
    const auto end = exp == std::string::npos ? buf.size() : exp;
    decimals = static_cast<int>(end - dot - 1);
  }
  return Number{value, decimals};
}

// "HH:MM:SS" -> seconds since midnight.
std::optional<int> parse_time_of_day(std::string_view token) {
  if (token.size() != 8 || token[2] != ':' || token[5] != ':') return std::nullopt;
  int parts[3];
  for (int k = 0; k < 3; ++k) {
    auto field = token.substr(static_cast<std::size_t>(k) * 3, 2);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + 2, parts[k]);
    if (ec != std::errc() || ptr != field.data() + 2) return std::nullopt;
  }
  if (parts[0] > 23 || parts[1] > 59 || parts[2] > 60) return std::nullopt;
  return parts[0] * 3600 + parts[1] * 60 + parts[2];
}

enum class Column { User, Nice, System, Iowait, Steal, Idle, Other };

Column column_for(std::string_view name) {
  if (name == "%user" || name == "%usr") return Column::User;
  if (name == "%nice") return Column::Nice;
  if (name == "%system" || name == "%sys") return Column::System;
  if (name == "%iowait") return Column::Iowait;
  if (name == "%steal") return Column::Steal;
  if (name == "%idle") return Column::Idle;
  return Column::Other;
}

double round_to_decimals(double v, int decimals) {
  decimals = std::clamp(decimals, 0, 9);
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

struct TimedRecord {
  SarRecord record;
  int seconds;
};

std::vector<TimedRecord> read_sar(std::istream& text) {
  std::vector<Column> layout = {Column::User, Column::System, Column::Iowait, Column::Steal,
                                Column::Idle};
  std::vector<TimedRecord> rows;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(text, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    if (std::any_of(tokens.begin(), tokens.end(),
                    [](std::string_view t) { return t == "%idle"; })) {
      layout.clear();
      for (auto t : tokens) {
        if (!t.empty() && t.front() == '%') layout.push_back(column_for(t));
      }
      continue;
    }

    auto seconds = parse_time_of_day(tokens[0]);
    if (!seconds) continue;
    std::size_t pos = 1;
    if (pos < tokens.size() && (tokens[pos] == "AM" || tokens[pos] == "PM")) {
      // 12-hour clock
      const bool pm = tokens[pos] == "PM";
      int hour = *seconds / 3600;
      if (hour == 12) hour = 0;
      if (pm) hour += 12;
      *seconds = hour * 3600 + *seconds % 3600;
      ++pos;
    }
    if (pos >= tokens.size() || tokens[pos] != "all") continue;
    ++pos;
    if (tokens.size() - pos < layout.size()) continue;

    SarRecord rec;
    rec.timestamp = std::string(tokens[0]);
    rec.decimals = 0;
    bool ok = true;
    bool has_idle = false;
    for (std::size_t c = 0; c < layout.size(); ++c) {
      auto num = parse_number(tokens[pos + c]);
      if (!num) {
        ok = false;
        break;
      }
      const double v = std::clamp(num->value, 0.0, 100.0);
      rec.decimals = std::max(rec.decimals, num->decimals);
      switch (layout[c]) {
        case Column::User: rec.user_pct = v; break;
        case Column::System: rec.system_pct = v; break;
        case Column::Iowait: rec.iowait_pct = v; break;
        case Column::Steal: rec.steal_pct = v; break;
        case Column::Idle: rec.idle_pct = v; has_idle = true; break;
        case Column::Nice:
        case Column::Other: break;
      }
    }
    if (!ok || !has_idle) continue;

    if (!rows.empty()) {
      const int prev = rows.back().seconds % kSecondsPerDay;
      if (*seconds < prev) {
        if (prev - *seconds < kMidnightJump) {
          throw Error(Errc::NonMonotonicTimestamps,
                      fmt::format("line {}: timestamp {} precedes {}", line_no, tokens[0],
                                  rows.back().record.timestamp),
                      line_no);
        }
      }
      // Unwrapped, monotone clock across midnight crossings.
      const int day_base = rows.back().seconds - prev;
      int unwrapped = day_base + *seconds;
      if (*seconds < prev) unwrapped += kSecondsPerDay;
      rows.push_back({std::move(rec), unwrapped});
    } else {
      rows.push_back({std::move(rec), *seconds});
    }
  }
  return rows;
}

}  // namespace

std::string_view metric_name(UtilizationMetric metric) noexcept {
  switch (metric) {
    case UtilizationMetric::BusyTotal: return "busy";
    case UtilizationMetric::UserPlusSystem: return "usersys";
    case UtilizationMetric::UserOnly: return "user";
  }
  return "busy";
}

std::optional<UtilizationMetric> parse_metric(std::string_view name) noexcept {
  if (name == "busy") return UtilizationMetric::BusyTotal;
  if (name == "usersys") return UtilizationMetric::UserPlusSystem;
  if (name == "user") return UtilizationMetric::UserOnly;
  return std::nullopt;
}

double utilization(const SarRecord& record, UtilizationMetric metric) {
  double v = 0.0;
  switch (metric) {
    case UtilizationMetric::BusyTotal: v = 100.0 - record.idle_pct; break;
    case UtilizationMetric::UserPlusSystem: v = record.user_pct + record.system_pct; break;
    case UtilizationMetric::UserOnly: v = record.user_pct; break;
  }
  return std::clamp(round_to_decimals(v, record.decimals), 0.0, 100.0);
}

std::vector<SarRecord> parse_sar_records(std::istream& text) {
  auto rows = read_sar(text);
  std::vector<SarRecord> out;
  out.reserve(rows.size());
  for (auto& r : rows) out.push_back(std::move(r.record));
  return out;
}

CpuTimeSeries parse_sar(std::istream& text, UtilizationMetric metric, std::string source) {
  const auto rows = read_sar(text);
  if (rows.empty()) throw Error(Errc::EmptyTrace, "no sar data rows found in " + source);
  std::vector<double> samples;
  samples.reserve(rows.size());
  for (const auto& r : rows) samples.push_back(utilization(r.record, metric));
  double interval = 1.0;
  if (rows.size() >= 2 && rows[1].seconds > rows[0].seconds) {
    interval = static_cast<double>(rows[1].seconds - rows[0].seconds);
  }
  return CpuTimeSeries(std::move(samples), interval, Stage::Raw, std::move(source));
}

CpuTimeSeries parse_csv(std::istream& text, double sample_interval, std::string source) {
  std::vector<double> samples;
  bool header_slot_open = true;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(text, line)) {
    ++line_no;
    const auto field = trim(line);
    if (field.empty()) continue;
    if (auto num = parse_number(field)) {
      samples.push_back(num->value);
      header_slot_open = false;
      continue;
    }
    if (header_slot_open) {
      header_slot_open = false;
      continue;
    }
    throw Error(Errc::MalformedLine,
                fmt::format("{} line {}: not a number: '{}'", source, line_no, field), line_no);
  }
  if (samples.empty()) throw Error(Errc::EmptyTrace, "no values found in " + source);
  return CpuTimeSeries(std::move(samples), sample_interval, Stage::Raw, std::move(source));
}

CpuTimeSeries parse_trace(std::istream& text, UtilizationMetric metric, std::string source) {
  std::stringstream buffer;
  buffer << text.rdbuf();
  const std::string content = buffer.str();
  std::istringstream in(content);
  if (content.find("%idle") != std::string::npos) {
    return parse_sar(in, metric, std::move(source));
  }
  return parse_csv(in, 1.0, std::move(source));
}

CpuTimeSeries load_trace_file(const std::string& path, UtilizationMetric metric) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read trace file " + path);
  return parse_trace(in, metric, path);
}

}  // namespace cpufp
