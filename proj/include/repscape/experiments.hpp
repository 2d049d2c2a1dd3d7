#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "repscape/analysis.hpp"

namespace repscape {

/// Collects per-method reports and refuses to mix scoring modes or color
/// scales in one table.
class MethodTable {
 public:
  void add(const RepresentativenessReport& report);
  const std::vector<std::pair<Method, double>>& rows() const noexcept { return rows_; }
  std::optional<ScoreMode> mode() const noexcept { return mode_; }

 private:
  std::optional<ScoreMode> mode_;
  std::optional<ColorScale> scale_;
  std::vector<std::pair<Method, double>> rows_;
};

struct Comparison {
  ScoringConfig scoring;  // as resolved for all three arms
  MethodTable table;
  double given_r = 0.0;
  double ideal_r = 0.0;
  BaselineResult baseline;
  double given_percentile = 0.0;
  double ideal_percentile = 0.0;
  std::size_t ideal_count = 0;
  bool ideal_truncated = false;
};

/// Given sample vs. greedy ideal sites vs. random baseline, all scored by
/// one Scorer. The ideal arm requests as many sites as the given sample
/// has unless `cfg.n_sites` says otherwise (non-zero).
Comparison compare_methods(std::shared_ptr<const Analysis> a, const SampleSet& given, SelectionConfig cfg,
                           ScoringConfig scoring, std::size_t trials, unsigned threads = 1);

struct SweepPoint {
  std::size_t value = 0;  // the swept parameter
  std::size_t n_sites = 0;
  std::size_t bins = 0;
  std::size_t window = 1;
  double ideal_r = 0.0;
  std::optional<double> random_mean_r;
  std::optional<double> given_r;
  bool truncated = false;
};

struct SweepResult {
  std::string axis;  // "n_sites" or "bins"
  std::vector<SweepPoint> points;
  nlohmann::json fixed;
};

/// Ideal and mean-random R for each N. With `base.bins == 0` every cell
/// uses bins = N.
SweepResult sweep_centroids(std::shared_ptr<const Analysis> a, const std::vector<std::size_t>& n_values,
                            const SelectionConfig& base, const ScoringConfig& scoring, std::size_t trials,
                            unsigned threads = 1, const SampleSet* given = nullptr);

/// Ideal R per (bins, W) at fixed N; one SweepResult per window size.
std::vector<SweepResult> sweep_bins(std::shared_ptr<const Analysis> a, const std::vector<std::size_t>& bin_values,
                                    const std::vector<std::size_t>& window_values, const SelectionConfig& base,
                                    const ScoringConfig& scoring);

nlohmann::json to_json(const Comparison& c);
nlohmann::json to_json(const SweepResult& s);
std::string sweep_csv(const std::vector<SweepResult>& sweeps);

}  // namespace repscape
