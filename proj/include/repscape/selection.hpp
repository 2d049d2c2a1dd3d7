#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "repscape/histogram.hpp"
#include "repscape/random.hpp"

namespace repscape {

/// How a centroid is picked from the winning bucket.
enum class MemberDraw { uniform, median };

struct SelectionConfig {
  std::size_t n_sites = 1;
  std::size_t bins = 0;  // 0 means "same as n_sites"
  std::size_t window = 1;
  std::uint64_t seed = 0;
  HistogramKind kind = HistogramKind::equal_width;
  MemberDraw draw = MemberDraw::uniform;

  std::size_t effective_bins() const noexcept { return bins == 0 ? n_sites : bins; }
};

struct SelectionStep {
  std::size_t bucket = 0;
  std::size_t window = 0;
  std::size_t region = 0;  // row of the analyzed dataset
};

struct Selection {
  std::vector<SelectionStep> steps;
  bool truncated = false;  // fewer than n_sites windows held any regions

  std::vector<std::size_t> regions() const;
};

/// Windowed histogram-mode greedy selection. Each round scans the buckets
/// in ascending order and keeps the largest frequency among buckets in
/// unused windows, preferring the later bucket on ties; the winner's window
/// is retired and one member is drawn from the bucket. Stops early once no
/// unused window holds a non-empty bucket.
Selection select_ideal(const Histogram& h, const WindowPartition& wp, const SelectionConfig& cfg);

struct BaselineConfig {
  std::size_t n_sites = 1;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct BaselineResult {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> r_values;
  double mean_r = 0.0;
};

/// Scores one candidate sample given as analyzed-dataset rows.
using SampleScorer = std::function<double(std::span<const std::size_t>)>;

/// `k` distinct row indices from [0, rows), uniformly (Floyd's algorithm).
std::vector<std::size_t> draw_distinct(std::size_t rows, std::size_t k, Rng& rng);

/// Trial t draws from its own substream substream_seed(seed, t), so the
/// result does not depend on the thread count.
BaselineResult random_baseline(std::size_t rows, const BaselineConfig& cfg, const SampleScorer& scorer);

/// 100 * (trials with r_value < r) / trials.
double percentile_of(const BaselineResult& b, double r);

nlohmann::json to_json(const BaselineResult& b);

}  // namespace repscape
