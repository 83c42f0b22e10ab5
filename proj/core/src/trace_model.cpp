#include "cpufp/trace_model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cpufp/error.hpp"

namespace cpufp {

namespace {

constexpr double kNormalizedTolerance = 1e-9;

}  // namespace

std::string_view stage_name(Stage stage) noexcept {
  switch (stage) {
    case Stage::Raw: return "raw";
    case Stage::Filtered: return "filtered";
    case Stage::Normalized: return "normalized";
  }
  return "unknown";
}

CpuTimeSeries::CpuTimeSeries(std::vector<double> samples, double sample_interval,
                             Stage stage, std::string source)
    : samples_(std::move(samples)),
      sample_interval_(sample_interval),
      stage_(stage),
      source_(std::move(source)) {
  if (!(sample_interval_ > 0.0) || !std::isfinite(sample_interval_)) {
    throw Error(Errc::InvalidArgument,
                fmt::format("sample interval must be positive, got {}", sample_interval_));
  }
  if (stage_ == Stage::Normalized && !samples_.empty()) {
    const auto [lo, hi] = std::minmax_element(samples_.begin(), samples_.end());
    if (std::abs(*lo) > kNormalizedTolerance || std::abs(*hi - 1.0) > kNormalizedTolerance) {
      throw Error(Errc::InvalidArgument,
                  fmt::format("normalized series must span [0, 1], got [{}, {}]", *lo, *hi));
    }
  }
}

CpuTimeSeries CpuTimeSeries::scaled(double factor) const {
  std::vector<double> out(samples_.begin(), samples_.end());
  for (auto& v : out) v *= factor;
  return CpuTimeSeries(std::move(out), sample_interval_, stage_, source_);
}

std::size_t series_length(const CpuTimeSeries& s) noexcept { return s.size(); }

void validate(const ConfigParams& params) {
  if (params.mappers <= 0 || params.reducers <= 0 || params.fs_split_mb <= 0 ||
      params.input_mb <= 0) {
    throw Error(Errc::InvalidArgument,
                fmt::format("configuration parameters must be positive ({})", to_string(params)));
  }
}

std::string to_string(const ConfigParams& params) {
  return fmt::format("M={}, R={}, FS={}M, I={}M", params.mappers, params.reducers,
                     params.fs_split_mb, params.input_mb);
}

}  // namespace cpufp
