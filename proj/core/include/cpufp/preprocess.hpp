#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cpufp/trace_model.hpp"

namespace cpufp {

/// Chebyshev type I low-pass design parameters. The cutoff is a fraction of
/// the Nyquist frequency.
struct FilterSpec {
  int order = 6;
  double passband_ripple_db = 0.5;
  double cutoff_norm = 0.1;
  bool zero_phase = true;

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

/// Throws Error(InvalidSpec) for order < 1, ripple <= 0 or cutoff outside (0, 1).
void validate(const FilterSpec& spec);

/// Transfer function b(z)/a(z) in powers of z^-1, a[0] == 1.
struct FilterCoefficients {
  std::vector<double> b;
  std::vector<double> a;
};

/// Digital Chebyshev type I low-pass: analog prototype poles on the ripple
/// ellipse, cutoff prewarped, bilinear transform, numerator scaled to unity
/// DC gain (so the passband spans [0, +ripple] dB). The returned poles are
/// the z-plane poles of the design.
struct ChebyshevDesign {
  FilterCoefficients coefficients;
  std::vector<std::complex<double>> poles;
};

ChebyshevDesign design_chebyshev1(const FilterSpec& spec);

/// H(e^{jw}) of a rational filter, w in radians per sample.
std::complex<double> frequency_response(const FilterCoefficients& c, double omega);

/// Direct-form II transposed IIR filtering with the given initial state
/// (size max(|a|, |b|) - 1, or empty for zero state).
std::vector<double> lfilter(const FilterCoefficients& c, std::span<const double> x,
                            std::span<const double> initial_state = {});

/// State that makes lfilter's step response start in steady state; scale it
/// by the first input sample.
std::vector<double> steady_state_initial(const FilterCoefficients& c);

/// Minimum input length accepted by filter_series: 3 * (order + 1).
std::size_t min_filter_length(const FilterSpec& spec) noexcept;

/// Low-pass a Raw series. Zero-phase mode runs the filter forward and
/// backward over an input padded at both ends by odd reflection, then trims
/// the padding. Output length equals input length, stage is Filtered.
/// Throws TraceTooShort(min_filter_length) for short inputs and
/// StageViolation for non-Raw input.
CpuTimeSeries filter_series(const CpuTimeSeries& raw, const FilterSpec& spec);

/// Min-max rescale to [0, 1]. Throws ConstantTrace when max - min < 1e-12,
/// EmptySeries on empty input.
CpuTimeSeries normalize(const CpuTimeSeries& filtered);

/// filter_series followed by normalize.
CpuTimeSeries preprocess(const CpuTimeSeries& raw, const FilterSpec& spec);

}  // namespace cpufp
