#include "cpufp/similarity.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cpufp/error.hpp"

namespace cpufp {

namespace {

// Relative to the squared magnitude of the data, so a flat series whose mean
// does not round-trip exactly still counts as flat.
constexpr double kFlatVariance = 1e-24;

}  // namespace

double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(Errc::LengthMismatch,
                fmt::format("correlation needs equal lengths, got {} and {}", x.size(), y.size()));
  }
  if (x.size() < 2) {
    throw Error(Errc::LengthMismatch,
                fmt::format("correlation needs at least 2 samples, got {}", x.size()));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  double magx = 0.0;
  double magy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
    magx = std::max(magx, std::abs(x[i]));
    magy = std::max(magy, std::abs(y[i]));
  }
  auto flat = [n](double ss, double mag) {
    const double scale = std::max(mag, 1e-300);
    return ss / n <= kFlatVariance * scale * scale;
  };
  if (flat(sxx, magx)) {
    throw Error(Errc::ZeroVariance, "correlation undefined: first series is constant");
  }
  if (flat(syy, magy)) {
    throw Error(Errc::ZeroVariance, "correlation undefined: second series is constant");
  }
  // (1/N) sum dx dy / (sigma_x sigma_y) with population sigmas; the 1/N
  // factors cancel.
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double correlation(const CpuTimeSeries& x, const CpuTimeSeries& y_prime) {
  return correlation(x.samples(), y_prime.samples());
}

SimilarityScore score(const AlignmentResult& alignment, const CpuTimeSeries& query,
                      double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(Errc::InvalidArgument,
                fmt::format("threshold must lie in (0, 1], got {}", threshold));
  }
  if (alignment.expanded_reference.size() != query.size()) {
    throw Error(Errc::LengthMismatch,
                fmt::format("expanded reference has {} samples, query has {}",
                            alignment.expanded_reference.size(), query.size()));
  }
  const double corr = correlation(query, alignment.expanded_reference);
  return SimilarityScore{corr, corr >= threshold, threshold};
}

}  // namespace cpufp
