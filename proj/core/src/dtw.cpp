#include "cpufp/dtw.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <fmt/format.h>

#include "cpufp/error.hpp"

namespace cpufp {

namespace {

void require_non_empty(const CpuTimeSeries& s, const char* role) {
  if (s.empty()) throw Error(Errc::EmptySeries, fmt::format("{} series {} is empty", role, s.source()));
}

}  // namespace

bool is_valid_warp_path(const WarpPath& path, std::size_t n, std::size_t m) noexcept {
  if (path.empty() || path.front() != PathStep{1, 1} || path.back() != PathStep{n, m}) {
    return false;
  }
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto di = path[k].i - path[k - 1].i;
    const auto dj = path[k].j - path[k - 1].j;
    if (path[k].i < path[k - 1].i || path[k].j < path[k - 1].j) return false;
    if (di > 1 || dj > 1 || (di == 0 && dj == 0)) return false;
  }
  return true;
}

double dtw_distance(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw Error(Errc::EmptySeries, "dtw input is empty");
  const std::size_t m = y.size();
  std::vector<double> prev(m);
  std::vector<double> cur(m);
  prev[0] = pointwise_distance(x[0], y[0]);
  for (std::size_t j = 1; j < m; ++j) prev[j] = prev[j - 1] + pointwise_distance(x[0], y[j]);
  for (std::size_t i = 1; i < x.size(); ++i) {
    cur[0] = prev[0] + pointwise_distance(x[i], y[0]);
    for (std::size_t j = 1; j < m; ++j) {
      cur[j] = std::min({cur[j - 1], prev[j], prev[j - 1]}) + pointwise_distance(x[i], y[j]);
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

AlignmentResult dtw_align(const CpuTimeSeries& x, const CpuTimeSeries& y) {
  require_non_empty(x, "query");
  require_non_empty(y, "reference");
  const auto xs = x.samples();
  const auto ys = y.samples();
  const std::size_t n = xs.size();
  const std::size_t m = ys.size();

  // Cost-to-go: togo[i][j] is the cheapest cost from cell (i, j), inclusive,
  // to (n-1, m-1). Walking it forward from (0, 0) lets ties resolve in favour
  // of the diagonal at the start of the alignment.
  std::vector<double> togo(n * m);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return togo[i * m + j]; };
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t jj = m; jj-- > 0;) {
      const double d = pointwise_distance(xs[ii], ys[jj]);
      const bool last_i = ii + 1 == n;
      const bool last_j = jj + 1 == m;
      if (last_i && last_j) {
        at(ii, jj) = d;
      } else if (last_i) {
        at(ii, jj) = d + at(ii, jj + 1);
      } else if (last_j) {
        at(ii, jj) = d + at(ii + 1, jj);
      } else {
        at(ii, jj) = d + std::min({at(ii + 1, jj + 1), at(ii + 1, jj), at(ii, jj + 1)});
      }
    }
  }

  WarpPath path;
  path.reserve(n + m - 1);
  std::size_t i = 0;
  std::size_t j = 0;
  path.push_back({1, 1});
  while (i + 1 < n || j + 1 < m) {
    if (i + 1 == n) {
      ++j;
    } else if (j + 1 == m) {
      ++i;
    } else {
      const double diag = at(i + 1, j + 1);
      const double down = at(i + 1, j);
      const double right = at(i, j + 1);
      if (diag <= down && diag <= right) {
        ++i;
        ++j;
      } else if (down <= right) {
        ++i;
      } else {
        ++j;
      }
    }
    path.push_back({i + 1, j + 1});
  }

  // Later steps overwrite earlier ones, leaving the last j for each i.
  std::vector<double> expanded(n);
  for (const auto& step : path) expanded[step.i - 1] = ys[step.j - 1];

  return AlignmentResult{
      dtw_distance(xs, ys), std::move(path),
      CpuTimeSeries(std::move(expanded), x.sample_interval(), Stage::Filtered,
                    y.source() + " (warped)")};
}

DistanceMatrix dtw_distance_matrix(std::span<const ProfileEntry> queries,
                                   std::span<const ProfileEntry> references, unsigned threads) {
  for (auto group : {queries, references}) {
    for (const auto& e : group) {
      if (e.series.empty()) {
        throw Error(Errc::EmptySeries,
                    fmt::format("entry {} ({}) has an empty series", e.app_id, to_string(e.params)));
      }
    }
  }

  DistanceMatrix out;
  out.rows = queries.size();
  out.cols = references.size();
  out.cells.resize(out.rows * out.cols);
  const std::size_t total = out.cells.size();
  if (total == 0) return out;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
      const auto& q = queries[k / out.cols];
      const auto& r = references[k % out.cols];
      const auto res = dtw_align(q.series, r.series);
      out.cells[k] = AlignmentSummary{res.distance, res.path.size()};
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return out;
}

}  // namespace cpufp
