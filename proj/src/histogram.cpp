#include "repscape/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "repscape/error.hpp"

namespace repscape {

std::string to_string(HistogramKind kind) {
  return kind == HistogramKind::equal_width ? "equal-width" : "equal-frequency";
}

HistogramKind parse_histogram_kind(const std::string& text) {
  if (text == "equal-width" || text == "width") return HistogramKind::equal_width;
  if (text == "equal-frequency" || text == "frequency") return HistogramKind::equal_frequency;
  throw UsageError("unknown histogram kind '" + text + "' (expected equal-width or equal-frequency)");
}

namespace {

std::size_t equal_width_bin(double x, double p_min, double p_max, std::size_t bins) {
  if (bins == 1 || !(x > p_min)) return 0;
  if (x >= p_max) return bins - 1;
  const double interval = (p_max - p_min) / static_cast<double>(bins);
  const auto k = static_cast<std::size_t>(std::floor((x - p_min) / interval));
  return std::min(k, bins - 1);
}

void fill_members(Histogram& h) {
  h.members.assign(h.bins(), {});
  h.frequencies.assign(h.bins(), 0);
  for (std::size_t i = 0; i < h.assignment.size(); ++i) {
    h.members[h.assignment[i]].push_back(i);
    ++h.frequencies[h.assignment[i]];
  }
}

}  // namespace

Histogram build_equal_width(const Projection& p, std::size_t bins) {
  if (bins == 0) throw UsageError("histogram needs at least 1 bin");
  if (p.values.empty()) throw DataError("empty_histogram", "cannot build a histogram of zero scores");
  if (bins > 1 && !(p.p_max > p.p_min))
    throw ComputationError("degenerate_projection", "all PC1 scores are equal; cannot split into " +
                                                        std::to_string(bins) + " equal-width bins");
  Histogram h;
  h.kind = HistogramKind::equal_width;
  h.edges.resize(bins + 1);
  const double range = p.p_max - p.p_min;
  for (std::size_t i = 0; i <= bins; ++i)
    h.edges[i] = p.p_min + static_cast<double>(i) * range / static_cast<double>(bins);
  h.edges.back() = p.p_max;
  h.frequencies.resize(bins);
  h.assignment.resize(p.values.size());
  for (std::size_t i = 0; i < p.values.size(); ++i)
    h.assignment[i] = equal_width_bin(p.values[i], p.p_min, p.p_max, bins);
  fill_members(h);
  return h;
}

Histogram build_equal_frequency(const Projection& p, std::size_t bins) {
  const std::size_t n = p.values.size();
  if (bins == 0) throw UsageError("histogram needs at least 1 bin");
  if (n == 0) throw DataError("empty_histogram", "cannot build a histogram of zero scores");
  if (bins > n)
    throw UsageError("equal-frequency histogram cannot have more bins (" + std::to_string(bins) +
                     ") than scores (" + std::to_string(n) + ")");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p.values[a] < p.values[b] || (p.values[a] == p.values[b] && a < b);
  });

  Histogram h;
  h.kind = HistogramKind::equal_frequency;
  h.frequencies.resize(bins);
  h.edges.resize(bins + 1);
  h.assignment.resize(n);
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t begin = b * n / bins, end = (b + 1) * n / bins;
    h.edges[b] = p.values[order[begin]];
    for (std::size_t r = begin; r < end; ++r) h.assignment[order[r]] = b;
  }
  h.edges[bins] = p.values[order[n - 1]];
  fill_members(h);
  return h;
}

Histogram build_histogram(const Projection& p, std::size_t bins, HistogramKind kind) {
  return kind == HistogramKind::equal_width ? build_equal_width(p, bins) : build_equal_frequency(p, bins);
}

std::size_t bin_of(const Histogram& h, double score) {
  const std::size_t bins = h.bins();
  if (h.kind == HistogramKind::equal_width) return equal_width_bin(score, h.edges.front(), h.edges.back(), bins);
  if (score <= h.edges.front()) return 0;
  if (score >= h.edges.back()) return bins - 1;
  const auto it = std::upper_bound(h.edges.begin(), h.edges.begin() + static_cast<std::ptrdiff_t>(bins), score);
  return static_cast<std::size_t>(it - h.edges.begin()) - 1;
}

WindowPartition::WindowPartition(std::size_t bins_, std::size_t window_size_) : bins(bins_), window_size(window_size_) {
  if (window_size < 1 || window_size > bins)
    throw UsageError("window size must satisfy 1 <= W <= bins (W=" + std::to_string(window_size) +
                     ", bins=" + std::to_string(bins) + ")");
}

std::size_t window_of(const WindowPartition& wp, std::size_t bin) {
  return std::min(bin / wp.window_size, wp.window_count() - 1);
}

nlohmann::json to_json(const Histogram& h) {
  return {{"kind", to_string(h.kind)}, {"edges", h.edges}, {"frequencies", h.frequencies}};
}

}  // namespace repscape
