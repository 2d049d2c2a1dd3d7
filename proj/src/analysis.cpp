#include "repscape/analysis.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "repscape/error.hpp"
#include "repscape/format.hpp"

namespace repscape {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_field(const std::string& text, std::size_t row, const std::string& column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw IngestError(row, column, "non-numeric value '" + text + "'");
  }
}

}  // namespace

std::shared_ptr<const Analysis> prepare_analysis(const Dataset& d, const AnalysisRequest& request, unsigned threads) {
  const Dataset native = denormalize(d);
  const Dataset filtered = request.filters.empty() ? native : apply_filter(native, request.filters);
  Dataset source = select_variables(native, request.variables);
  Dataset analyzed = normalize_columns(select_variables(filtered, request.variables));

  std::vector<FilteredRegion> excluded;
  if (filtered.rows() != native.rows())
    for (const auto& r : native.regions())
      if (!filtered.find_region(r.id)) excluded.push_back({r.id, r.lat, r.lon});

  std::vector<std::string> degenerate;
  for (auto c : degenerate_columns(analyzed)) degenerate.push_back(analyzed.variables()[c].name);

  ProjectionModel model = fit_pca(analyzed, threads);
  Projection projection = project_pc1(model, analyzed, threads);
  std::vector<double> explained;
  try {
    explained = explained_variance(model);
  } catch (const ComputationError&) {
  }
  return std::make_shared<const Analysis>(Analysis{std::move(source), std::move(analyzed), std::move(excluded),
                                                   std::move(degenerate), std::move(model), std::move(projection),
                                                   std::move(explained)});
}

SampleSet resolve_samples(const Analysis& a, const SampleSpec& spec) {
  SampleSet out;
  for (const auto& id : spec.ids) {
    if (const auto row = a.analyzed.find_region(id)) {
      const auto& r = a.analyzed.regions()[*row];
      out.sites.push_back({r.id, r.lat, r.lon, a.projection.values[*row], *row});
    } else if (const auto src = a.source.find_region(id)) {
      const auto& r = a.source.regions()[*src];
      const auto normalized = normalize_row(a.analyzed, a.source.row(*src));
      out.sites.push_back({r.id, r.lat, r.lon, a.model.score(normalized), std::nullopt});
    } else {
      throw DataError("unknown_sample", "sample site '" + id + "' is not a region of the dataset");
    }
  }
  for (const auto& p : spec.points) {
    const auto normalized = normalize_row(a.analyzed, p.values);
    out.sites.push_back({p.id, p.lat, p.lon, a.model.score(normalized), std::nullopt});
  }
  if (out.empty()) throw DataError("empty_sample_set", "sample set is empty");
  return out;
}

SampleSet samples_from_rows(const Analysis& a, std::span<const std::size_t> rows) {
  SampleSet out;
  out.sites.reserve(rows.size());
  for (auto row : rows) {
    const auto& r = a.analyzed.regions()[row];
    out.sites.push_back({r.id, r.lat, r.lon, a.projection.values[row], row});
  }
  return out;
}

SampleSpec read_samples_csv(std::string_view text, const std::vector<std::string>& variables) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw IngestError(0, "header", "empty sample file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_line(line);
  if (header.empty() || header[0] != "region_id") throw IngestError(0, "header", "sample file must start with region_id");

  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < header.size(); ++c) column.emplace(header[c], c);
  bool external = !variables.empty();
  for (const auto& v : variables) external = external && column.count(v);
  if (external && (!column.count("lat") || !column.count("lon")))
    throw IngestError(0, "header", "sample points with variable values also need lat and lon columns");

  SampleSpec spec;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const auto fields = split_line(line);
    if (fields.size() != header.size())
      throw IngestError(row, "region_id", "expected " + std::to_string(header.size()) + " fields, got " +
                                              std::to_string(fields.size()));
    if (fields[0].empty()) throw IngestError(row, "region_id", "empty id");
    if (!external) {
      spec.ids.push_back(fields[0]);
      continue;
    }
    ExternalPoint p;
    p.id = fields[0];
    p.lat = parse_field(fields[column["lat"]], row, "lat");
    p.lon = parse_field(fields[column["lon"]], row, "lon");
    for (const auto& v : variables) p.values.push_back(parse_field(fields[column[v]], row, v));
    spec.points.push_back(std::move(p));
  }
  if (spec.empty()) throw IngestError(1, "region_id", "sample file has no rows");
  return spec;
}

SampleSpec samples_from_json(const nlohmann::json& j, const std::vector<std::string>& variables) {
  SampleSpec spec;
  try {
    if (j.is_array()) {
      spec.ids = j.get<std::vector<std::string>>();
      return spec;
    }
    if (j.contains("ids")) spec.ids = j.at("ids").get<std::vector<std::string>>();
    if (j.contains("points")) {
      for (const auto& pj : j.at("points")) {
        ExternalPoint p;
        p.id = pj.at("id").get<std::string>();
        p.lat = pj.value("lat", 0.0);
        p.lon = pj.value("lon", 0.0);
        const auto& values = pj.at("values");
        for (const auto& v : variables) {
          if (!values.contains(v))
            throw DataError("invalid_sample", "sample point '" + p.id + "' lacks a value for '" + v + "'");
          p.values.push_back(values.at(v).get<double>());
        }
        spec.points.push_back(std::move(p));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("invalid_sample", std::string("malformed samples: ") + e.what());
  }
  return spec;
}

Scorer::Scorer(std::shared_ptr<const Analysis> analysis, ScoringConfig config, std::size_t sites)
    : analysis_(std::move(analysis)), config_(std::move(config)) {
  if (config_.mode == ScoreMode::window_coverage) {
    if (config_.coverage.bins == 0) config_.coverage.bins = sites;
    if (config_.coverage.bins == 0) throw UsageError("coverage scoring needs at least 1 bin");
    histogram_ = build_histogram(analysis_->projection, config_.coverage.bins, config_.coverage.kind);
    windows_ = WindowPartition(config_.coverage.bins, config_.coverage.window);
  }
}

RepresentativenessReport Scorer::evaluate(const SampleSet& s, Method method) const {
  return repscape::evaluate(analysis_->analyzed, analysis_->projection, s, config_.mode, config_.scale, method,
                            histogram_, windows_);
}

double Scorer::score(const SampleSet& s) const {
  if (config_.mode == ScoreMode::window_coverage) return score_window_coverage(*histogram_, *windows_, s);
  return score_heat(normalize_distances(final_distance(analysis_->projection, s), analysis_->projection),
                    config_.scale);
}

double Scorer::score_rows(std::span<const std::size_t> rows) const {
  return score(samples_from_rows(*analysis_, rows));
}

RepresentativenessOutcome run_representativeness(std::shared_ptr<const Analysis> a, const SampleSet& samples,
                                                 const ScoringConfig& scoring, Method method) {
  const Scorer scorer(a, scoring, samples.size());
  RepresentativenessOutcome out;
  out.samples = samples;
  out.report = scorer.evaluate(samples, method);
  out.heatmap = build_document(out.report, samples, a->excluded, scoring.scale);
  return out;
}

IdealOutcome run_ideal(std::shared_ptr<const Analysis> a, const SelectionConfig& cfg, ScoringConfig scoring) {
  IdealOutcome out;
  const std::size_t bins = cfg.effective_bins();
  out.histogram = build_histogram(a->projection, bins, cfg.kind);
  const WindowPartition wp(bins, cfg.window);
  out.selection = select_ideal(out.histogram, wp, cfg);
  const auto rows = out.selection.regions();
  out.sites = samples_from_rows(*a, rows);
  scoring.coverage = {bins, cfg.window, cfg.kind};
  const Scorer scorer(a, scoring, bins);
  out.report = scorer.evaluate(out.sites, Method::ideal);
  out.heatmap = build_document(out.report, out.sites, a->excluded, scoring.scale);
  return out;
}

BaselineResult run_baseline(std::shared_ptr<const Analysis> a, const BaselineConfig& cfg,
                            const ScoringConfig& scoring) {
  const Scorer scorer(a, scoring, cfg.n_sites);
  return random_baseline(a->analyzed.rows(), cfg,
                         [&](std::span<const std::size_t> rows) { return scorer.score_rows(rows); });
}

std::string centroids_csv(const IdealOutcome& outcome) {
  std::string out = "region_id,lat,lon,pc1_score,bucket\n";
  for (std::size_t i = 0; i < outcome.sites.size(); ++i) {
    const auto& s = outcome.sites.sites[i];
    out += s.id + "," + format_double(s.lat) + "," + format_double(s.lon) + "," + format_double(s.score) + "," +
           std::to_string(outcome.selection.steps[i].bucket) + "\n";
  }
  return out;
}

nlohmann::json to_json(const SampleSet& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& site : s.sites)
    out.push_back({{"id", site.id},
                   {"lat", site.lat},
                   {"lon", site.lon},
                   {"pc1_score", site.score},
                   {"in_analysis", site.row.has_value()}});
  return out;
}

nlohmann::json analysis_summary_json(const Analysis& a) {
  return {{"variables", a.analyzed.variable_names()},
          {"rows_analyzed", a.analyzed.rows()},
          {"rows_excluded", a.excluded.size()},
          {"degenerate_variables", a.degenerate_variables},
          {"explained_variance", a.explained},
          {"p_min", a.projection.p_min},
          {"p_max", a.projection.p_max},
          {"model", to_json(a.model)}};
}

nlohmann::json to_json(const ScoringConfig& s) {
  return {{"mode", to_string(s.mode)},
          {"scale", to_json(s.scale)},
          {"bins", s.coverage.bins},
          {"window", s.coverage.window},
          {"kind", to_string(s.coverage.kind)}};
}

nlohmann::json to_json(const Analysis& a, const RepresentativenessOutcome& o) {
  return {{"R", o.report.r},
          {"mode", to_string(o.report.mode)},
          {"explained_variance", a.explained},
          {"analysis", analysis_summary_json(a)},
          {"samples", to_json(o.samples)},
          {"report", to_json(o.report)},
          {"heatmap", to_json(o.heatmap)}};
}

nlohmann::json to_json(const Analysis& a, const IdealOutcome& o, const SelectionConfig& cfg) {
  nlohmann::json sites = nlohmann::json::array();
  for (std::size_t i = 0; i < o.sites.size(); ++i) {
    const auto& s = o.sites.sites[i];
    sites.push_back({{"region_id", s.id},
                     {"lat", s.lat},
                     {"lon", s.lon},
                     {"pc1_score", s.score},
                     {"bucket", o.selection.steps[i].bucket},
                     {"window", o.selection.steps[i].window}});
  }
  return {{"R", o.report.r},
          {"mode", to_string(o.report.mode)},
          {"requested", cfg.n_sites},
          {"bins", cfg.effective_bins()},
          {"window", cfg.window},
          {"kind", to_string(cfg.kind)},
          {"seed", cfg.seed},
          {"truncated", o.selection.truncated},
          {"sites", sites},
          {"histogram", to_json(o.histogram)},
          {"analysis", analysis_summary_json(a)},
          {"report", to_json(o.report)},
          {"heatmap", to_json(o.heatmap)}};
}

nlohmann::json baseline_json(const BaselineResult& b, const std::vector<double>& r_values) {
  nlohmann::json placements = nlohmann::json::array();
  for (double r : r_values) placements.push_back({{"r", r}, {"percentile", percentile_of(b, r)}});
  return {{"baseline", to_json(b)}, {"percentiles", placements}};
}

}  // namespace repscape
