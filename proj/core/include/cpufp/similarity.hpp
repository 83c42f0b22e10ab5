#pragma once

#include <span>

#include "cpufp/dtw.hpp"
#include "cpufp/trace_model.hpp"

namespace cpufp {

inline constexpr double kDefaultThreshold = 0.9;

struct SimilarityScore {
  double corr = 0.0;
  bool accepted = false;
  double threshold = kDefaultThreshold;
};

/// Pearson correlation with population moments, clamped to [-1, 1].
/// Throws LengthMismatch for unequal lengths or fewer than two samples and
/// ZeroVariance when either input is constant.
double correlation(std::span<const double> x, std::span<const double> y);
double correlation(const CpuTimeSeries& x, const CpuTimeSeries& y_prime);

/// Correlates the query with the alignment's expanded reference; accepted
/// when corr >= threshold. Throws InvalidArgument for a threshold outside (0, 1].
SimilarityScore score(const AlignmentResult& alignment, const CpuTimeSeries& query,
                      double threshold = kDefaultThreshold);

}  // namespace cpufp
