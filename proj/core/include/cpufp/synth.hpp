#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cpufp/trace_model.hpp"

namespace cpufp {

/// Stylized MapReduce CPU shapes used for fixtures.
enum class SynthFamily {
  WordCountLike,  // sustained map plateau, short reduce tail
  TerasortLike,   // sawtooth map phase, long heavy reduce
  EximLike,       // WordCount-like plateau with a deeper, longer shuffle dip
};

std::string_view family_name(SynthFamily family) noexcept;  // wordcount|terasort|exim
std::optional<SynthFamily> parse_family(std::string_view name) noexcept;

struct SynthSpec {
  ConfigParams params;
  SynthFamily family = SynthFamily::WordCountLike;
  std::int64_t duration_s = 180;
  double noise_amplitude = 5.0;  // percent points, uniform in [-a, a]
  std::uint64_t seed = 1;
};

/// Throws InvalidSpec unless duration_s >= 60, 0 <= noise_amplitude <= 50
/// and params are positive.
void validate(const SynthSpec& spec);

/// Noise-free phase template (ramp-up, map, shuffle dip, reduce, tail-off),
/// one sample per second. Map and reduce phase lengths grow with
/// input_mb / mappers and input_mb / reducers.
std::vector<double> synth_template(const SynthSpec& spec);

/// Template plus seeded uniform noise, clamped to [0, 100]. Identical specs
/// give identical series on every platform.
CpuTimeSeries generate(const SynthSpec& spec);

}  // namespace cpufp
