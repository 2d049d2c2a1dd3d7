#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "repscape/pca.hpp"

namespace repscape {

enum class HistogramKind { equal_width, equal_frequency };

std::string to_string(HistogramKind kind);
HistogramKind parse_histogram_kind(const std::string& text);

/// Histogram over PC1 scores.
///
/// Equal-width bins are right-open, [edge_i, edge_{i+1}), except the last
/// bin which also holds p_max. Equal-frequency bins are cut at sorted-rank
/// positions floor(i * n / bins); ties are split by (score, region index)
/// order, so counts differ by at most one.
struct Histogram {
  HistogramKind kind = HistogramKind::equal_width;
  std::vector<double> edges;                     // bins + 1
  std::vector<std::size_t> frequencies;          // per bin
  std::vector<std::vector<std::size_t>> members;  // per bin, ascending region index
  std::vector<std::size_t> assignment;           // region index -> bin

  std::size_t bins() const noexcept { return frequencies.size(); }
  std::size_t total() const noexcept { return assignment.size(); }
};

Histogram build_equal_width(const Projection& p, std::size_t bins);
Histogram build_equal_frequency(const Projection& p, std::size_t bins);
Histogram build_histogram(const Projection& p, std::size_t bins, HistogramKind kind);

/// Bin for an arbitrary score. Scores outside [edges.front(), edges.back()]
/// clamp to the first or last bin. For equal-frequency histograms with tied
/// cut values this returns the last bin whose lower edge is <= score; use
/// `assignment` for dataset regions.
std::size_t bin_of(const Histogram& h, double score);

/// Consecutive bins grouped W at a time. Remainder bins (when W does not
/// divide the bin count) belong to the last window.
struct WindowPartition {
  std::size_t bins = 1;
  std::size_t window_size = 1;

  WindowPartition() = default;
  WindowPartition(std::size_t bins, std::size_t window_size);

  std::size_t window_count() const noexcept { return bins / window_size; }
};

std::size_t window_of(const WindowPartition& wp, std::size_t bin);

nlohmann::json to_json(const Histogram& h);

}  // namespace repscape
