#include "cpufp/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "cpufp/error.hpp"

namespace cpufp {

namespace {

struct Shape {
  double map_weight;
  double shuffle_weight;
  double reduce_weight;
  double map_level;
  double map_swing;      // sawtooth peak-to-trough, 0 for a plateau
  double map_period_s;
  double dip_level;
  double reduce_level;
  double wobble;         // plateau undulation amplitude
  double notch_depth;    // mid-map notch, 0 for none
};

constexpr double kIdleLevel = 5.0;
constexpr double kRampWeight = 0.06;
constexpr double kTailWeight = 0.06;

Shape shape_for(SynthFamily family) {
  switch (family) {
    case SynthFamily::WordCountLike:
      return {0.55, 0.08, 0.15, 85.0, 0.0, 40.0, 40.0, 60.0, 6.0, 0.0};
    case SynthFamily::TerasortLike:
      return {0.35, 0.08, 0.40, 62.0, 55.0, 30.0, 25.0, 92.0, 0.0, 0.0};
    case SynthFamily::EximLike:
      return {0.50, 0.14, 0.15, 80.0, 0.0, 40.0, 20.0, 55.0, 1.5, 30.0};
  }
  return shape_for(SynthFamily::WordCountLike);
}

// Saturating work measure in (0, 1).
double load(double mb_per_worker) { return mb_per_worker / (1.0 + mb_per_worker); }

double lerp(double a, double b, double t) { return a + (b - a) * t; }

}  // namespace

std::string_view family_name(SynthFamily family) noexcept {
  switch (family) {
    case SynthFamily::WordCountLike: return "wordcount";
    case SynthFamily::TerasortLike: return "terasort";
    case SynthFamily::EximLike: return "exim";
  }
  return "wordcount";
}

std::optional<SynthFamily> parse_family(std::string_view name) noexcept {
  if (name == "wordcount") return SynthFamily::WordCountLike;
  if (name == "terasort") return SynthFamily::TerasortLike;
  if (name == "exim") return SynthFamily::EximLike;
  return std::nullopt;
}

void validate(const SynthSpec& spec) {
  if (spec.duration_s < 60) {
    throw Error(Errc::InvalidSpec, fmt::format("duration must be >= 60 s, got {}", spec.duration_s));
  }
  if (!(spec.noise_amplitude >= 0.0 && spec.noise_amplitude <= 50.0)) {
    throw Error(Errc::InvalidSpec,
                fmt::format("noise amplitude must lie in [0, 50], got {}", spec.noise_amplitude));
  }
  try {
    validate(spec.params);
  } catch (const Error& e) {
    throw Error(Errc::InvalidSpec, e.what());
  }
}

std::vector<double> synth_template(const SynthSpec& spec) {
  validate(spec);
  const Shape s = shape_for(spec.family);
  const double input = static_cast<double>(spec.params.input_mb);
  const double map_load = load(input / static_cast<double>(spec.params.mappers));
  const double reduce_load = load(input / static_cast<double>(spec.params.reducers));

  std::array<double, 5> weights = {
      kRampWeight,
      s.map_weight * (0.7 + 0.6 * map_load),
      s.shuffle_weight,
      s.reduce_weight * (0.7 + 0.6 * reduce_load),
      kTailWeight,
  };
  double total_weight = 0.0;
  for (double w : weights) total_weight += w;
  const double duration = static_cast<double>(spec.duration_s);
  std::array<double, 6> edges{};  // phase boundaries in seconds
  for (std::size_t k = 0; k < weights.size(); ++k) {
    edges[k + 1] = edges[k] + duration * weights[k] / total_weight;
  }

  const double map_start = s.map_level - s.map_swing / 2.0;
  const double map_end = s.map_swing > 0.0 ? map_start : s.map_level;

  std::vector<double> out(static_cast<std::size_t>(spec.duration_s));
  for (std::size_t t = 0; t < out.size(); ++t) {
    const double time = static_cast<double>(t) + 0.5;
    double v = 0.0;
    if (time < edges[1]) {
      v = lerp(kIdleLevel, map_start, time / edges[1]);
    } else if (time < edges[2]) {
      const double local = time - edges[1];
      if (s.map_swing > 0.0) {
        const double frac = std::fmod(local, s.map_period_s) / s.map_period_s;
        v = map_start + s.map_swing * frac;
      } else {
        v = s.map_level + s.wobble * std::sin(2.0 * std::numbers::pi * local / s.map_period_s);
        if (s.notch_depth > 0.0) {
          // raised-cosine notch over the middle fifth of the map phase
          const double u = local / (edges[2] - edges[1]);
          if (u > 0.4 && u < 0.6) {
            v -= s.notch_depth * (0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (u - 0.4) / 0.2));
          }
        }
      }
    } else if (time < edges[3]) {
      // raised-cosine dip from the end of map down to dip_level and up to reduce
      const double u = (time - edges[2]) / (edges[3] - edges[2]);
      const double from = u < 0.5 ? map_end : s.reduce_level;
      const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * u);
      v = lerp(from, s.dip_level, w);
    } else if (time < edges[4]) {
      const double u = (time - edges[3]) / (edges[4] - edges[3]);
      v = s.reduce_level - 8.0 * u;
    } else {
      const double u = std::min(1.0, (time - edges[4]) / (edges[5] - edges[4]));
      v = lerp(s.reduce_level - 8.0, kIdleLevel, u);
    }
    out[t] = std::clamp(v, 0.0, 100.0);
  }
  return out;
}

CpuTimeSeries generate(const SynthSpec& spec) {
  auto samples = synth_template(spec);
  if (spec.noise_amplitude > 0.0) {
    // Hand-rolled uniform draw: std::uniform_real_distribution differs
    // between standard libraries.
    std::mt19937_64 rng(spec.seed);
    for (auto& v : samples) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      v = std::clamp(v + spec.noise_amplitude * (2.0 * u - 1.0), 0.0, 100.0);
    }
  }
  return CpuTimeSeries(std::move(samples), 1.0, Stage::Raw,
                       fmt::format("synthetic:{}:seed={}", family_name(spec.family), spec.seed));
}

}  // namespace cpufp
