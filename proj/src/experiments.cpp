#include "repscape/experiments.hpp"

#include <algorithm>

#include "repscape/error.hpp"
#include "repscape/format.hpp"

namespace repscape {

namespace {

void require_ascending(const std::vector<std::size_t>& v, const std::string& what) {
  if (v.empty()) throw UsageError(what + " must not be empty");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i - 1] < v[i])) throw UsageError(what + " must be strictly ascending");
}

struct IdealRun {
  Selection selection;
  SampleSet sites;
};

IdealRun select_sites(const Analysis& a, const SelectionConfig& cfg) {
  const std::size_t bins = cfg.effective_bins();
  const auto h = build_histogram(a.projection, bins, cfg.kind);
  IdealRun run;
  run.selection = select_ideal(h, WindowPartition(bins, cfg.window), cfg);
  const auto rows = run.selection.regions();
  run.sites = samples_from_rows(a, rows);
  return run;
}

ScoringConfig bind_coverage(ScoringConfig scoring, const SelectionConfig& cfg) {
  scoring.coverage = {cfg.effective_bins(), cfg.window, cfg.kind};
  return scoring;
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

void MethodTable::add(const RepresentativenessReport& report) {
  if (mode_ && *mode_ != report.mode)
    throw DataError("mixed_mode", "cannot compare " + to_string(report.mode) + " R with " + to_string(*mode_) + " R");
  if (scale_ && !(*scale_ == report.scale))
    throw DataError("mixed_mode", "cannot compare reports scored with different color scales");
  mode_ = report.mode;
  scale_ = report.scale;
  rows_.emplace_back(report.method, report.r);
}

Comparison compare_methods(std::shared_ptr<const Analysis> a, const SampleSet& given, SelectionConfig cfg,
                           ScoringConfig scoring, std::size_t trials, unsigned threads) {
  if (given.empty()) throw DataError("empty_sample_set", "given sample set is empty");
  if (cfg.n_sites == 0) cfg.n_sites = given.size();

  Comparison out;
  out.scoring = bind_coverage(std::move(scoring), cfg);
  const Scorer scorer(a, out.scoring, cfg.effective_bins());

  const auto given_report = scorer.evaluate(given, Method::given);
  out.table.add(given_report);
  out.given_r = given_report.r;

  const auto ideal = select_sites(*a, cfg);
  const auto ideal_report = scorer.evaluate(ideal.sites, Method::ideal);
  out.table.add(ideal_report);
  out.ideal_r = ideal_report.r;
  out.ideal_count = ideal.sites.size();
  out.ideal_truncated = ideal.selection.truncated;

  out.baseline = random_baseline(a->analyzed.rows(), {cfg.n_sites, trials, cfg.seed, threads},
                                 [&](std::span<const std::size_t> rows) { return scorer.score_rows(rows); });
  RepresentativenessReport random_row;
  random_row.mode = out.scoring.mode;
  random_row.method = Method::random;
  random_row.r = out.baseline.mean_r;
  random_row.scale = out.scoring.scale;
  out.table.add(random_row);

  out.given_percentile = percentile_of(out.baseline, out.given_r);
  out.ideal_percentile = percentile_of(out.baseline, out.ideal_r);
  return out;
}

SweepResult sweep_centroids(std::shared_ptr<const Analysis> a, const std::vector<std::size_t>& n_values,
                            const SelectionConfig& base, const ScoringConfig& scoring, std::size_t trials,
                            unsigned threads, const SampleSet* given) {
  require_ascending(n_values, "centroid counts");
  if (n_values.front() == 0) throw UsageError("centroid counts must be at least 1");
  if (n_values.back() > a->analyzed.rows())
    throw UsageError("centroid count " + std::to_string(n_values.back()) +
                     " exceeds the region count " + std::to_string(a->analyzed.rows()));
  SweepResult out;
  out.axis = "n_sites";
  out.fixed = {{"bins", base.bins == 0 ? nlohmann::json("n_sites") : nlohmann::json(base.bins)},
               {"window", base.window},
               {"kind", to_string(base.kind)},
               {"seed", base.seed},
               {"trials", trials},
               {"scoring", to_json(scoring)}};
  for (auto n : n_values) {
    SelectionConfig cfg = base;
    cfg.n_sites = n;
    const auto bound = bind_coverage(scoring, cfg);
    const Scorer scorer(a, bound, cfg.effective_bins());
    const auto ideal = select_sites(*a, cfg);

    SweepPoint p;
    p.value = n;
    p.n_sites = n;
    p.bins = cfg.effective_bins();
    p.window = cfg.window;
    p.ideal_r = scorer.score(ideal.sites);
    p.truncated = ideal.selection.truncated;
    p.random_mean_r = random_baseline(a->analyzed.rows(), {n, trials, cfg.seed, threads},
                                      [&](std::span<const std::size_t> rows) { return scorer.score_rows(rows); })
                          .mean_r;
    if (given) p.given_r = scorer.score(*given);
    out.points.push_back(p);
  }
  return out;
}

std::vector<SweepResult> sweep_bins(std::shared_ptr<const Analysis> a, const std::vector<std::size_t>& bin_values,
                                    const std::vector<std::size_t>& window_values, const SelectionConfig& base,
                                    const ScoringConfig& scoring) {
  require_ascending(bin_values, "bin counts");
  if (window_values.empty()) throw UsageError("window sizes must not be empty");
  if (bin_values.front() < base.n_sites)
    throw UsageError("the smallest bin count must be at least the number of sites (" +
                                            std::to_string(base.n_sites) + ")");
  std::vector<SweepResult> out;
  for (auto w : window_values) {
    SweepResult s;
    s.axis = "bins";
    s.fixed = {{"n_sites", base.n_sites},
               {"window", w},
               {"kind", to_string(base.kind)},
               {"seed", base.seed},
               {"scoring", to_json(scoring)}};
    for (auto bins : bin_values) {
      SelectionConfig cfg = base;
      cfg.bins = bins;
      cfg.window = w;
      const auto bound = bind_coverage(scoring, cfg);
      const Scorer scorer(a, bound, bins);
      const auto ideal = select_sites(*a, cfg);
      SweepPoint p;
      p.value = bins;
      p.n_sites = cfg.n_sites;
      p.bins = bins;
      p.window = w;
      p.ideal_r = scorer.score(ideal.sites);
      p.truncated = ideal.selection.truncated;
      s.points.push_back(p);
    }
    out.push_back(std::move(s));
  }
  return out;
}

nlohmann::json to_json(const Comparison& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [method, r] : c.table.rows()) rows.push_back({{"method", to_string(method)}, {"R", r}});
  return {{"scoring", to_json(c.scoring)},
          {"methods", rows},
          {"given_percentile", c.given_percentile},
          {"ideal_percentile", c.ideal_percentile},
          {"ideal_count", c.ideal_count},
          {"ideal_truncated", c.ideal_truncated},
          {"baseline", to_json(c.baseline)}};
}

nlohmann::json to_json(const SweepResult& s) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : s.points) {
    nlohmann::json j = {{"value", p.value},     {"n_sites", p.n_sites}, {"bins", p.bins},
                        {"window", p.window},   {"ideal_r", p.ideal_r}, {"truncated", p.truncated}};
    j["random_mean_r"] = p.random_mean_r ? nlohmann::json(*p.random_mean_r) : nlohmann::json(nullptr);
    j["given_r"] = p.given_r ? nlohmann::json(*p.given_r) : nlohmann::json(nullptr);
    points.push_back(std::move(j));
  }
  return {{"axis", s.axis}, {"fixed", s.fixed}, {"points", points}};
}

std::string sweep_csv(const std::vector<SweepResult>& sweeps) {
  std::string out = "axis,value,n_sites,bins,window,ideal_r,random_mean_r,given_r,truncated\n";
  for (const auto& s : sweeps)
    for (const auto& p : s.points)
      out += s.axis + "," + std::to_string(p.value) + "," + std::to_string(p.n_sites) + "," + std::to_string(p.bins) +
             "," + std::to_string(p.window) + "," + format_double(p.ideal_r) + "," + optional_field(p.random_mean_r) +
             "," + optional_field(p.given_r) + "," + (p.truncated ? "true" : "false") + "\n";
  return out;
}

}  // namespace repscape
