#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cpufp/trace_model.hpp"

namespace cpufp {

/// One cell of a warp path, 1-based: query index i, reference index j.
struct PathStep {
  std::size_t i = 1;
  std::size_t j = 1;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

using WarpPath = std::vector<PathStep>;

/// True when the path runs from (1,1) to (n,m) in unit steps that never
/// move backwards.
bool is_valid_warp_path(const WarpPath& path, std::size_t n, std::size_t m) noexcept;

struct AlignmentResult {
  double distance = 0.0;
  WarpPath path;
  /// The reference stretched onto the query's time axis: one value per query
  /// sample, repeating reference samples as the path dictates. Not
  /// re-normalized, so it is tagged Filtered.
  CpuTimeSeries expanded_reference;
};

/// |x - y|, the one-dimensional Euclidean distance.
inline double pointwise_distance(double x, double y) noexcept { return x > y ? x - y : y - x; }

/// Unconstrained DTW between query `x` (length N) and reference `y`
/// (length M). distance is the cumulative cost D(N, M) with the usual
/// cumulative first row and column.
///
/// The path is the minimum-cost path that, walked from (1,1), prefers a
/// diagonal step over a query step (i+1, j) over a reference step (i, j+1)
/// whenever they lead to equal remaining cost. Y'[i] is y at the last path
/// cell in query row i.
///
/// Throws EmptySeries when either input is empty.
AlignmentResult dtw_align(const CpuTimeSeries& x, const CpuTimeSeries& y);

/// Cumulative DTW cost only, O(M) memory.
double dtw_distance(std::span<const double> x, std::span<const double> y);

struct AlignmentSummary {
  double distance = 0.0;
  std::size_t path_length = 0;

  friend bool operator==(const AlignmentSummary&, const AlignmentSummary&) = default;
};

/// Row-major queries x references summary matrix.
struct DistanceMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<AlignmentSummary> cells;

  const AlignmentSummary& at(std::size_t q, std::size_t r) const { return cells.at(q * cols + r); }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;
};

/// dtw_align for every (query, reference) pair. Cells are spread over
/// `threads` workers (0: hardware concurrency, 1: sequential); the result does
/// not depend on the thread count. Throws EmptySeries naming the entry.
DistanceMatrix dtw_distance_matrix(std::span<const ProfileEntry> queries,
                                   std::span<const ProfileEntry> references,
                                   unsigned threads = 0);

}  // namespace cpufp
