#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "repscape/dataset.hpp"
#include "repscape/histogram.hpp"
#include "repscape/pca.hpp"

namespace repscape {

/// One sample site. `row` is set when the site is a region of the analyzed
/// dataset; otherwise only its coordinates and PC1 score are known.
struct SampleSite {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;
  double score = 0.0;
  std::optional<std::size_t> row;
};

struct SampleSet {
  std::vector<SampleSite> sites;

  std::size_t size() const noexcept { return sites.size(); }
  bool empty() const noexcept { return sites.empty(); }
  std::vector<double> scores() const;
};

/// Equal-width partition of [0, 1] into colored buckets, green to red.
struct ColorScale {
  std::vector<std::string> palette;

  ColorScale();  // 10 buckets
  explicit ColorScale(std::size_t buckets);
  explicit ColorScale(std::vector<std::string> palette);

  std::size_t bucket_count() const noexcept { return palette.size(); }
  /// Lower edge of bucket i, exactly i / bucket_count.
  double lower_edge(std::size_t i) const {
    return static_cast<double>(i) / static_cast<double>(bucket_count());
  }

  bool operator==(const ColorScale&) const = default;
};

enum class ScoreMode { heat_scale, window_coverage };
enum class Method { given, ideal, random };

std::string to_string(ScoreMode mode);
std::string to_string(Method method);
ScoreMode parse_score_mode(const std::string& text);

/// min over sites of |score_i - site score|.
std::vector<double> final_distance(const Projection& p, const SampleSet& s);

/// fd / (p_max - p_min), clamped to 1. Indices of clamped entries are
/// appended to `clamped` when given.
std::vector<double> normalize_distances(const std::vector<double>& fd, const Projection& p,
                                        std::vector<std::size_t>* clamped = nullptr);

/// Bucket i holds nfd in [i/B, (i+1)/B); nfd = 1 folds into bucket B-1.
std::size_t bucket_of(double nfd, const ColorScale& scale);
std::vector<std::size_t> bucket_distances(const std::vector<double>& nfd, const ColorScale& scale);

/// Fraction of regions in bucket 0.
double score_heat(const std::vector<double>& nfd, const ColorScale& scale);

/// Bins occupied by the sites: a dataset region uses its assigned bin,
/// an external site goes through bin_of.
std::vector<std::size_t> sample_bins(const Histogram& h, const SampleSet& s);

/// Sum of frequencies over the union of all windows holding a sample bin,
/// divided by the region count.
double score_window_coverage(const Histogram& h, const WindowPartition& wp, const std::vector<std::size_t>& bins);
double score_window_coverage(const Histogram& h, const WindowPartition& wp, const SampleSet& s);

/// |1 - d|. Diagnostic only; not used for scoring.
inline double representation_value(double nfd) { return nfd > 1.0 ? nfd - 1.0 : 1.0 - nfd; }

struct RegionScore {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;
  double fd = 0.0;
  double nfd = 0.0;
  std::size_t bucket = 0;
};

struct RepresentativenessReport {
  ScoreMode mode = ScoreMode::heat_scale;
  Method method = Method::given;
  double r = 0.0;
  ColorScale scale;
  std::vector<RegionScore> cells;
  std::vector<std::string> clamped;  // ids whose nfd exceeded 1
};

struct CoverageConfig {
  std::size_t bins = 0;
  std::size_t window = 1;
  HistogramKind kind = HistogramKind::equal_width;
};

/// Scores a sample set against the analyzed regions. `coverage` is
/// required in window-coverage mode.
RepresentativenessReport evaluate(const Dataset& analyzed, const Projection& p, const SampleSet& s,
                                  ScoreMode mode, const ColorScale& scale, Method method,
                                  const std::optional<Histogram>& coverage_hist = std::nullopt,
                                  const std::optional<WindowPartition>& coverage_windows = std::nullopt);

nlohmann::json to_json(const ColorScale& scale);
ColorScale color_scale_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RepresentativenessReport& report);

}  // namespace repscape
