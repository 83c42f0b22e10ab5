#include "cpufp/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "cpufp/error.hpp"

namespace cpufp {

namespace {

constexpr double kConstantTraceRange = 1e-12;

using Complex = std::complex<double>;

// Coefficients of prod (1 - r_k z^-1), highest power of z first.
std::vector<Complex> poly_from_roots(std::span<const Complex> roots) {
  std::vector<Complex> c{1.0};
  for (const auto& r : roots) {
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] -= r * c[k - 1];
  }
  return c;
}

std::vector<double> odd_extend(std::span<const double> x, std::size_t pad) {
  const std::size_t n = x.size();
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t k = pad; k >= 1; --k) ext.push_back(2.0 * x[0] - x[k]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t k = 1; k <= pad; ++k) ext.push_back(2.0 * x[n - 1] - x[n - 1 - k]);
  return ext;
}

std::vector<double> scaled(std::span<const double> v, double factor) {
  std::vector<double> out(v.begin(), v.end());
  for (auto& e : out) e *= factor;
  return out;
}

}  // namespace

void validate(const FilterSpec& spec) {
  if (spec.order < 1) {
    throw Error(Errc::InvalidSpec, fmt::format("filter order must be >= 1, got {}", spec.order));
  }
  if (!(spec.passband_ripple_db > 0.0) || !std::isfinite(spec.passband_ripple_db)) {
    throw Error(Errc::InvalidSpec,
                fmt::format("passband ripple must be > 0 dB, got {}", spec.passband_ripple_db));
  }
  if (!(spec.cutoff_norm > 0.0 && spec.cutoff_norm < 1.0)) {
    throw Error(Errc::InvalidSpec,
                fmt::format("cutoff must lie in (0, 1), got {}", spec.cutoff_norm));
  }
}

ChebyshevDesign design_chebyshev1(const FilterSpec& spec) {
  validate(spec);
  const int n = spec.order;
  const double eps = std::sqrt(std::pow(10.0, spec.passband_ripple_db / 10.0) - 1.0);
  const double mu = std::asinh(1.0 / eps) / n;

  // Analog prototype with unit passband edge.
  std::vector<Complex> analog;
  analog.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const double theta = std::numbers::pi * (2.0 * k - 1.0) / (2.0 * n);
    analog.emplace_back(-std::sinh(mu) * std::sin(theta), std::cosh(mu) * std::cos(theta));
  }
  Complex gain = 1.0;
  for (const auto& p : analog) gain *= -p;
  double analog_gain = gain.real();
  if (n % 2 == 0) analog_gain /= std::sqrt(1.0 + eps * eps);

  // Bilinear transform s = (z - 1) / (z + 1) with the cutoff prewarped.
  const double warped = std::tan(std::numbers::pi * spec.cutoff_norm / 2.0);
  std::vector<Complex> poles;
  poles.reserve(analog.size());
  Complex denom = 1.0;
  for (const auto& p : analog) {
    const Complex ps = p * warped;
    poles.push_back((1.0 + ps) / (1.0 - ps));
    denom *= (1.0 - ps);
  }
  const double digital_gain = (analog_gain * std::pow(warped, n) / denom).real();

  ChebyshevDesign design;
  auto& c = design.coefficients;
  // (1 + z^-1)^n
  c.b.assign(static_cast<std::size_t>(n) + 1, 0.0);
  c.b[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    for (int m = k; m > 0; --m) c.b[static_cast<std::size_t>(m)] += c.b[static_cast<std::size_t>(m - 1)];
  }
  for (auto& v : c.b) v *= digital_gain;
  const auto a = poly_from_roots(poles);
  c.a.reserve(a.size());
  for (const auto& v : a) c.a.push_back(v.real());

  // Even orders put DC at the bottom of the ripple band; rescale so a flat
  // trace passes through unchanged. Odd orders are already at unity.
  double b_sum = 0.0;
  double a_sum = 0.0;
  for (double v : c.b) b_sum += v;
  for (double v : c.a) a_sum += v;
  const double dc = b_sum / a_sum;
  for (auto& v : c.b) v /= dc;
  design.poles = std::move(poles);
  return design;
}

std::complex<double> frequency_response(const FilterCoefficients& c, double omega) {
  auto eval = [omega](const std::vector<double>& p) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      acc += p[k] * std::polar(1.0, -omega * static_cast<double>(k));
    }
    return acc;
  };
  return eval(c.b) / eval(c.a);
}

std::vector<double> lfilter(const FilterCoefficients& c, std::span<const double> x,
                            std::span<const double> initial_state) {
  const std::size_t len = std::max(c.a.size(), c.b.size());
  std::vector<double> b(len, 0.0);
  std::vector<double> a(len, 0.0);
  const double a0 = c.a.at(0);
  for (std::size_t k = 0; k < c.b.size(); ++k) b[k] = c.b[k] / a0;
  for (std::size_t k = 0; k < c.a.size(); ++k) a[k] = c.a[k] / a0;

  std::vector<double> z(len - 1, 0.0);
  if (!initial_state.empty()) {
    if (initial_state.size() != z.size()) {
      throw Error(Errc::InvalidArgument,
                  fmt::format("initial state must have {} elements", z.size()));
    }
    std::copy(initial_state.begin(), initial_state.end(), z.begin());
  }

  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double yi = (z.empty() ? 0.0 : z[0]) + b[0] * xi;
    for (std::size_t k = 0; k + 1 < z.size(); ++k) {
      z[k] = z[k + 1] + b[k + 1] * xi - a[k + 1] * yi;
    }
    if (!z.empty()) z.back() = b[len - 1] * xi - a[len - 1] * yi;
    y[i] = yi;
  }
  return y;
}

std::vector<double> steady_state_initial(const FilterCoefficients& c) {
  const std::size_t len = std::max(c.a.size(), c.b.size());
  if (len < 2) return {};
  std::vector<double> b(len, 0.0);
  std::vector<double> a(len, 0.0);
  const double a0 = c.a.at(0);
  for (std::size_t k = 0; k < c.b.size(); ++k) b[k] = c.b[k] / a0;
  for (std::size_t k = 0; k < c.a.size(); ++k) a[k] = c.a[k] / a0;

  // Solves (I - A^T) z = b[1:] - a[1:] b[0] for the companion matrix A.
  double rhs_sum = 0.0;
  double a_sum = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    a_sum += a[k];
    if (k > 0) rhs_sum += b[k] - a[k] * b[0];
  }
  std::vector<double> zi(len - 1, 0.0);
  zi[0] = rhs_sum / a_sum;
  double asum = 1.0;
  double csum = 0.0;
  for (std::size_t k = 1; k < len - 1; ++k) {
    asum += a[k];
    csum += b[k] - a[k] * b[0];
    zi[k] = asum * zi[0] - csum;
  }
  return zi;
}

std::size_t min_filter_length(const FilterSpec& spec) noexcept {
  return 3 * (static_cast<std::size_t>(std::max(spec.order, 0)) + 1);
}

CpuTimeSeries filter_series(const CpuTimeSeries& raw, const FilterSpec& spec) {
  if (raw.stage() != Stage::Raw) {
    throw Error(Errc::StageViolation,
                fmt::format("filter expects a raw series, got {}", stage_name(raw.stage())));
  }
  const auto design = design_chebyshev1(spec);
  const auto& c = design.coefficients;
  const std::size_t required = min_filter_length(spec);
  const auto x = raw.samples();
  if (x.size() < required) {
    throw Error(Errc::TraceTooShort,
                fmt::format("{} has {} samples, filtering needs at least {}", raw.source(),
                            x.size(), required),
                static_cast<std::int64_t>(required));
  }

  const auto zi = steady_state_initial(c);
  std::vector<double> out;
  if (spec.zero_phase) {
    const std::size_t pad = std::min(required, x.size() - 1);
    const auto ext = odd_extend(x, pad);
    auto forward = lfilter(c, ext, scaled(zi, ext.front()));
    std::reverse(forward.begin(), forward.end());
    auto backward = lfilter(c, forward, scaled(zi, forward.front()));
    std::reverse(backward.begin(), backward.end());
    out.assign(backward.begin() + static_cast<std::ptrdiff_t>(pad),
               backward.end() - static_cast<std::ptrdiff_t>(pad));
  } else {
    out = lfilter(c, x, scaled(zi, x.front()));
  }
  return CpuTimeSeries(std::move(out), raw.sample_interval(), Stage::Filtered, raw.source());
}

CpuTimeSeries normalize(const CpuTimeSeries& filtered) {
  if (filtered.stage() != Stage::Filtered) {
    throw Error(Errc::StageViolation,
                fmt::format("normalize expects a filtered series, got {}",
                            stage_name(filtered.stage())));
  }
  const auto x = filtered.samples();
  if (x.empty()) throw Error(Errc::EmptySeries, filtered.source() + " is empty");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  if (range < kConstantTraceRange) {
    throw Error(Errc::ConstantTrace,
                fmt::format("{} is constant (range {}), nothing to match", filtered.source(),
                            range));
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - lo) / range;
  return CpuTimeSeries(std::move(out), filtered.sample_interval(), Stage::Normalized,
                       filtered.source());
}

CpuTimeSeries preprocess(const CpuTimeSeries& raw, const FilterSpec& spec) {
  // A flat input can come out of the filter with rounding-level wiggle above
  // the normalize threshold; reject it on the raw samples.
  const auto x = raw.samples();
  if (x.empty()) return normalize(filter_series(raw, spec));
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi - lo < kConstantTraceRange) {
    throw Error(Errc::ConstantTrace, fmt::format("{} is constant, nothing to match", raw.source()));
  }
  // The filter has unity DC gain and normalize() follows, so an affine
  // rescale up front cancels out. Snapping to a 2^-32 grid makes a scaled
  // copy of the same trace reach the filter bit for bit identical; otherwise
  // rounding noise of ~1e-11 can flip near-tied DTW steps.
  std::vector<double> canonical(x.size());
  std::transform(x.begin(), x.end(), canonical.begin(), [lo, hi](double v) {
    return std::ldexp(std::nearbyint(std::ldexp((v - lo) / (hi - lo), 32)), -32);
  });
  return normalize(filter_series(
      CpuTimeSeries(std::move(canonical), raw.sample_interval(), Stage::Raw, raw.source()), spec));
}

}  // namespace cpufp
