#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "repscape/dataset.hpp"
#include "repscape/heatmap.hpp"
#include "repscape/histogram.hpp"
#include "repscape/pca.hpp"
#include "repscape/representativeness.hpp"
#include "repscape/selection.hpp"

namespace repscape {

/// Variable subset (empty = all) and conjunctive filter for one analysis.
struct AnalysisRequest {
  std::vector<std::string> variables;
  std::vector<FilterPredicate> filters;
};

/// Everything derived from a dataset snapshot for one (variables, filters)
/// choice: filter on native values, then select variables, normalize on the
/// surviving rows, fit PCA and project.
struct Analysis {
  Dataset source;    // selected variables, every row, native units
  Dataset analyzed;  // filtered + normalized
  std::vector<FilteredRegion> excluded;
  std::vector<std::string> degenerate_variables;
  ProjectionModel model;
  Projection projection;
  std::vector<double> explained;  // empty when the data has no variance
};

std::shared_ptr<const Analysis> prepare_analysis(const Dataset& d, const AnalysisRequest& request,
                                                 unsigned threads = 1);

/// A sample site outside the analyzed rows, with native values in the
/// analysis variable order.
struct ExternalPoint {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;
  std::vector<double> values;
};

struct SampleSpec {
  std::vector<std::string> ids;
  std::vector<ExternalPoint> points;

  bool empty() const noexcept { return ids.empty() && points.empty(); }
};

/// Ids found among the analyzed rows reuse their projection; ids that
/// were filtered out are normalized and projected through the fitted
/// model. Unknown ids throw DataError `unknown_sample`.
SampleSet resolve_samples(const Analysis& a, const SampleSpec& spec);

SampleSet samples_from_rows(const Analysis& a, std::span<const std::size_t> rows);

/// Sample CSV. The header must start with `region_id`. When every analysis
/// variable is present as a column, rows are external points; otherwise
/// rows name regions by id and other columns are ignored.
SampleSpec read_samples_csv(std::string_view text, const std::vector<std::string>& variables);

/// Sample JSON: either an array of ids or {"ids": [...], "points":
/// [{"id", "lat", "lon", "values": {var: x}}]}.
SampleSpec samples_from_json(const nlohmann::json& j, const std::vector<std::string>& variables);

struct ScoringConfig {
  ScoreMode mode = ScoreMode::heat_scale;
  ColorScale scale;
  CoverageConfig coverage;  // bins == 0 means "one bin per sample site"
};

/// Binds one analysis to one scoring configuration. Every method (given,
/// ideal, random) goes through the same instance so results are comparable.
class Scorer {
 public:
  /// `sites` resolves a zero coverage bin count.
  Scorer(std::shared_ptr<const Analysis> analysis, ScoringConfig config, std::size_t sites);

  const Analysis& analysis() const noexcept { return *analysis_; }
  const ScoringConfig& config() const noexcept { return config_; }
  const std::optional<Histogram>& histogram() const noexcept { return histogram_; }

  RepresentativenessReport evaluate(const SampleSet& s, Method method) const;
  double score(const SampleSet& s) const;
  double score_rows(std::span<const std::size_t> rows) const;

 private:
  std::shared_ptr<const Analysis> analysis_;
  ScoringConfig config_;
  std::optional<Histogram> histogram_;
  std::optional<WindowPartition> windows_;
};

struct RepresentativenessOutcome {
  SampleSet samples;
  RepresentativenessReport report;
  HeatMapDocument heatmap;
};

RepresentativenessOutcome run_representativeness(std::shared_ptr<const Analysis> a, const SampleSet& samples,
                                                 const ScoringConfig& scoring, Method method = Method::given);

struct IdealOutcome {
  Selection selection;
  SampleSet sites;
  Histogram histogram;
  RepresentativenessReport report;
  HeatMapDocument heatmap;
};

/// Coverage scoring reuses the selection's bins, window and histogram kind.
IdealOutcome run_ideal(std::shared_ptr<const Analysis> a, const SelectionConfig& cfg, ScoringConfig scoring);

BaselineResult run_baseline(std::shared_ptr<const Analysis> a, const BaselineConfig& cfg,
                            const ScoringConfig& scoring);

/// `region_id,lat,lon,pc1_score,bucket`.
std::string centroids_csv(const IdealOutcome& outcome);

nlohmann::json to_json(const SampleSet& s);
nlohmann::json analysis_summary_json(const Analysis& a);
nlohmann::json to_json(const ScoringConfig& s);

/// Response documents shared by the CLI and the service.
nlohmann::json to_json(const Analysis& a, const RepresentativenessOutcome& o);
nlohmann::json to_json(const Analysis& a, const IdealOutcome& o, const SelectionConfig& cfg);
nlohmann::json baseline_json(const BaselineResult& b, const std::vector<double>& r_values);

}  // namespace repscape
