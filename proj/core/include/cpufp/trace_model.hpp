#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cpufp {

enum class Stage { Raw, Filtered, Normalized };

std::string_view stage_name(Stage stage) noexcept;

/// Uniformly sampled CPU utilization trace. Raw traces are in percent,
/// normalized traces are unitless in [0, 1]. Immutable once built.
class CpuTimeSeries {
public:
  /// Throws Error(InvalidArgument) when sample_interval is not strictly
  /// positive, or when stage is Normalized and the samples are not spread
  /// over exactly [0, 1].
  explicit CpuTimeSeries(std::vector<double> samples, double sample_interval = 1.0,
                Stage stage = Stage::Raw, std::string source = "synthetic");

  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  double sample_interval() const noexcept { return sample_interval_; }
  Stage stage() const noexcept { return stage_; }
  const std::string& source() const noexcept { return source_; }

  /// Copy with every sample multiplied by `factor`; stage and metadata kept.
  /// Only meaningful for Raw and Filtered series.
  CpuTimeSeries scaled(double factor) const;

  friend bool operator==(const CpuTimeSeries&, const CpuTimeSeries&) = default;

private:
  std::vector<double> samples_;
  double sample_interval_;
  Stage stage_;
  std::string source_;
};

std::size_t series_length(const CpuTimeSeries& s) noexcept;

/// The MapReduce knobs varied per experiment.
struct ConfigParams {
  std::int64_t mappers = 1;
  std::int64_t reducers = 1;
  std::int64_t fs_split_mb = 1;
  std::int64_t input_mb = 1;

  friend auto operator<=>(const ConfigParams&, const ConfigParams&) = default;
};

/// Throws Error(InvalidArgument) unless all four fields are positive.
void validate(const ConfigParams& params);

/// "M=11, R=6, FS=20M, I=30M"
std::string to_string(const ConfigParams& params);

struct ProfileEntry {
  std::string app_id;
  ConfigParams params;
  CpuTimeSeries series;

  friend bool operator==(const ProfileEntry&, const ProfileEntry&) = default;
};

}  // namespace cpufp
