#include <csignal>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "repscape/analysis.hpp"
#include "repscape/dataset.hpp"
#include "repscape/error.hpp"
#include "repscape/experiments.hpp"
#include "repscape/format.hpp"
#include "repscape/heatmap.hpp"
#include "repscape/service.hpp"
#include "repscape/synthetic.hpp"

namespace {

using namespace repscape;
using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitComputation = 4;

struct DataOptions {
  std::string data;
  std::vector<std::string> variables;
  std::vector<std::string> filters;
  unsigned threads = 1;
};

struct ScoringOptions {
  std::string mode;
  std::size_t colors = 10;
  std::size_t bins = 0;
  std::size_t window = 1;
  std::string kind = "equal-width";
};

struct RasterOptions {
  std::string heatmap;
  std::string ppm;
  std::string markers;
  std::size_t width = 720;
  std::size_t height = 360;
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("--data", o.data, "Region CSV (region_id,lat,lon,vars...)")->required();
  cmd->add_option("--variables", o.variables, "Variables to analyze (default: all)")->delimiter(',');
  cmd->add_option("--filter", o.filters, "Range filter var:lo..hi (repeatable, comma-separated)")->delimiter(',');
  cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 256u));
}

void add_scoring_options(CLI::App* cmd, ScoringOptions& o, bool with_bins) {
  cmd->add_option("--mode", o.mode, "Scoring mode: heat-scale or window-coverage");
  cmd->add_option("--colors", o.colors, "Color buckets of the heat scale")->check(CLI::Range(2, 1000));
  if (with_bins) {
    cmd->add_option("--bins", o.bins, "Histogram bins for window-coverage scoring (default: one per site)");
    cmd->add_option("--window", o.window, "Bins per window for window-coverage scoring")->check(CLI::PositiveNumber);
    cmd->add_option("--kind", o.kind, "Histogram kind: equal-width or equal-frequency");
  }
}

void add_raster_options(CLI::App* cmd, RasterOptions& o) {
  cmd->add_option("--heatmap", o.heatmap, "Write the heat-map JSON document here");
  cmd->add_option("--ppm", o.ppm, "Write a PPM raster of the heat map here");
  cmd->add_option("--markers", o.markers, "Write the sample marker CSV here");
  cmd->add_option("--width", o.width, "Raster width in pixels")->check(CLI::Range(1, 20000));
  cmd->add_option("--height", o.height, "Raster height in pixels")->check(CLI::Range(1, 20000));
}

std::shared_ptr<const Analysis> load_analysis(const DataOptions& o) {
  const auto data = ingest_csv_text(read_file(o.data));
  AnalysisRequest req;
  req.variables = o.variables;
  for (const auto& f : o.filters) req.filters.push_back(parse_filter(f));
  return prepare_analysis(data, req, o.threads);
}

ScoringConfig scoring_config(const ScoringOptions& o, ScoreMode default_mode) {
  ScoringConfig s;
  s.mode = o.mode.empty() ? default_mode : parse_score_mode(o.mode);
  s.scale = ColorScale(o.colors);
  s.coverage = {o.bins, o.window, parse_histogram_kind(o.kind)};
  return s;
}

void emit(const std::string& path, std::string_view contents) {
  if (!path.empty()) write_file_atomic(path, contents);
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

void emit_heatmap(const RasterOptions& o, const HeatMapDocument& doc, unsigned threads) {
  emit(o.heatmap, pretty(to_json(doc)));
  emit(o.markers, markers_csv(doc));
  if (!o.ppm.empty()) emit(o.ppm, render_raster(doc, o.width, o.height, threads).to_ppm());
}

void print_r(const char* label, double r) { std::printf("%s=%.6f\n", label, r); }

SelectionConfig selection_config(std::size_t n, std::size_t bins, std::size_t window, std::uint64_t seed,
                                 const std::string& kind, const std::string& draw) {
  SelectionConfig cfg;
  cfg.n_sites = n;
  cfg.bins = bins;
  cfg.window = window;
  cfg.seed = seed;
  cfg.kind = parse_histogram_kind(kind);
  if (draw != "uniform" && draw != "median") throw UsageError("--draw must be uniform or median");
  cfg.draw = draw == "median" ? MemberDraw::median : MemberDraw::uniform;
  return cfg;
}

int serve(const std::string& host, int flag_port, unsigned threads) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Service service({threads});
  const int port = resolve_port(flag_port);
  int bound = port;
  if (port == 0) {
    bound = service.bind_any_port(host);
    if (bound < 0) throw DataError("bind_failed", "cannot bind an ephemeral port on " + host);
  } else if (!service.bind(host, port)) {
    throw DataError("bind_failed", "cannot bind " + host + ":" + std::to_string(port));
  }
  std::printf("listening on http://%s:%d/v1\n", host.c_str(), bound);
  std::fflush(stdout);

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });
  service.listen();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Representativeness of sample sites over geospatial region data", "repscape"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "repscape 1.0.0");

  DataOptions data;
  ScoringOptions scoring;
  RasterOptions raster;
  std::string samples_path, out_path, report_path;
  std::size_t n = 0, bins = 0, window = 1, trials = 1000, rows = 50000;
  std::uint64_t seed = 0;
  std::string kind = "equal-width", draw = "uniform", axis, preset = "clustered", labels_path, host = "127.0.0.1";
  std::vector<std::size_t> values, windows;
  std::vector<double> r_values;
  int port = -1;

  auto* rep = app.add_subcommand("representativeness", "Score a sample set against the dataset");
  add_data_options(rep, data);
  add_scoring_options(rep, scoring, true);
  add_raster_options(rep, raster);
  rep->add_option("--samples", samples_path, "Sample CSV (region_id[,lat,lon,vars...])")->required();
  rep->add_option("--report", report_path, "Write the report JSON here");

  auto* ideal = app.add_subcommand("ideal", "Select ideal sites with the greedy histogram-mode algorithm");
  add_data_options(ideal, data);
  add_scoring_options(ideal, scoring, false);
  add_raster_options(ideal, raster);
  ideal->add_option("--n", n, "Number of sites")->required()->check(CLI::PositiveNumber);
  ideal->add_option("--bins", bins, "Histogram bins (default: --n)");
  ideal->add_option("--window", window, "Bins per window")->check(CLI::PositiveNumber);
  ideal->add_option("--kind", kind, "Histogram kind: equal-width or equal-frequency");
  ideal->add_option("--draw", draw, "Member pick inside a bucket: uniform or median");
  ideal->add_option("--seed", seed, "Random seed");
  ideal->add_option("--out", out_path, "Write the centroid CSV here");
  ideal->add_option("--report", report_path, "Write the report JSON here");

  auto* base = app.add_subcommand("baseline", "Random-sampling baseline over repeated trials");
  add_data_options(base, data);
  add_scoring_options(base, scoring, true);
  base->add_option("--n", n, "Sites per trial")->required()->check(CLI::PositiveNumber);
  base->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
  base->add_option("--seed", seed, "Random seed");
  base->add_option("--r", r_values, "R values to place within the trial distribution")->delimiter(',');
  base->add_option("--out", out_path, "Write the baseline JSON here");

  auto* cmp = app.add_subcommand("compare", "Given sample vs. ideal sites vs. random baseline");
  add_data_options(cmp, data);
  add_scoring_options(cmp, scoring, false);
  cmp->add_option("--samples", samples_path, "Given sample CSV")->required();
  cmp->add_option("--n", n, "Ideal sites and random sites per trial (default: size of the given sample)");
  cmp->add_option("--bins", bins, "Histogram bins (default: --n)");
  cmp->add_option("--window", window, "Bins per window")->check(CLI::PositiveNumber);
  cmp->add_option("--kind", kind, "Histogram kind: equal-width or equal-frequency");
  cmp->add_option("--trials", trials, "Random trials")->check(CLI::PositiveNumber);
  cmp->add_option("--seed", seed, "Random seed");
  cmp->add_option("--out", out_path, "Write the comparison JSON here");

  auto* sweep = app.add_subcommand("sweep", "Ideal and random R across centroid counts or bin counts");
  add_data_options(sweep, data);
  add_scoring_options(sweep, scoring, false);
  sweep->add_option("--axis", axis, "centroids or bins")->required()->check(CLI::IsMember({"centroids", "bins"}));
  sweep->add_option("--values", values, "Centroid counts or bin counts, ascending")->delimiter(',');
  sweep->add_option("--windows", windows, "Window sizes for the bins axis")->delimiter(',');
  sweep->add_option("--n", n, "Sites for the bins axis");
  sweep->add_option("--bins", bins, "Fixed bins for the centroids axis (default: one per site)");
  sweep->add_option("--window", window, "Window for the centroids axis")->check(CLI::PositiveNumber);
  sweep->add_option("--kind", kind, "Histogram kind: equal-width or equal-frequency");
  sweep->add_option("--samples", samples_path, "Optional given sample scored at each point");
  sweep->add_option("--trials", trials, "Random trials per point (centroids axis)")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Random seed");
  sweep->add_option("--out", out_path, "Write the sweep CSV here");
  sweep->add_option("--json", report_path, "Write the sweep JSON here");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic region dataset");
  synth->add_option("--preset", preset, "Mixture preset: clustered or bimodal");
  synth->add_option("--rows", rows, "Number of regions")->check(CLI::PositiveNumber);
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("--out", out_path, "Output CSV")->required();
  synth->add_option("--labels", labels_path, "Write generating component per region here");

  auto* srv = app.add_subcommand("serve", "Run the HTTP service");
  srv->add_option("--host", host, "Listen address");
  srv->add_option("--port", port, "Port (overrides REPSCAPE_PORT; 0 picks a free port)")->check(CLI::Range(0, 65535));
  srv->add_option("--threads", data.threads, "Worker threads per request")->check(CLI::Range(1u, 256u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (*rep) {
    const auto a = load_analysis(data);
    const auto samples = resolve_samples(*a, read_samples_csv(read_file(samples_path), a->analyzed.variable_names()));
    const auto out = run_representativeness(a, samples, scoring_config(scoring, ScoreMode::heat_scale));
    emit(report_path, pretty(to_json(*a, out)));
    emit_heatmap(raster, out.heatmap, data.threads);
    if (!out.report.clamped.empty())
      std::fprintf(stderr, "warning: %zu regions lie beyond the projected range and were clamped\n",
                   out.report.clamped.size());
    print_r("R", out.report.r);
  } else if (*ideal) {
    const auto a = load_analysis(data);
    const auto cfg = selection_config(n, bins, window, seed, kind, draw);
    const auto out = run_ideal(a, cfg, scoring_config(scoring, ScoreMode::window_coverage));
    if (out.selection.truncated)
      std::fprintf(stderr, "warning: only %zu of %zu sites selected; no further non-empty windows\n",
                   out.sites.size(), n);
    emit(out_path, centroids_csv(out));
    emit(report_path, pretty(to_json(*a, out, cfg)));
    emit_heatmap(raster, out.heatmap, data.threads);
    print_r("R", out.report.r);
  } else if (*base) {
    const auto a = load_analysis(data);
    const auto result = run_baseline(a, {n, trials, seed, data.threads}, scoring_config(scoring, ScoreMode::heat_scale));
    emit(out_path, pretty(baseline_json(result, r_values)));
    print_r("mean_R", result.mean_r);
    for (double r : r_values) std::printf("percentile(%.6f)=%.2f\n", r, percentile_of(result, r));
  } else if (*cmp) {
    const auto a = load_analysis(data);
    const auto given = resolve_samples(*a, read_samples_csv(read_file(samples_path), a->analyzed.variable_names()));
    const auto cfg = selection_config(n, bins, window, seed, kind, "uniform");
    const auto c = compare_methods(a, given, cfg, scoring_config(scoring, ScoreMode::heat_scale), trials, data.threads);
    emit(out_path, pretty(to_json(c)));
    print_r("given_R", c.given_r);
    print_r("ideal_R", c.ideal_r);
    print_r("random_mean_R", c.baseline.mean_r);
    std::printf("given_percentile=%.2f\nideal_percentile=%.2f\n", c.given_percentile, c.ideal_percentile);
  } else if (*sweep) {
    const auto a = load_analysis(data);
    const auto sc = scoring_config(scoring, ScoreMode::heat_scale);
    std::vector<SweepResult> results;
    if (axis == "centroids") {
      if (values.empty()) throw UsageError("--values is required for --axis centroids");
      std::optional<SampleSet> given;
      if (!samples_path.empty())
        given = resolve_samples(*a, read_samples_csv(read_file(samples_path), a->analyzed.variable_names()));
      const auto cfg = selection_config(1, bins, window, seed, kind, "uniform");
      results.push_back(sweep_centroids(a, values, cfg, sc, trials, data.threads, given ? &*given : nullptr));
    } else {
      if (n == 0) throw UsageError("--n is required for --axis bins");
      if (values.empty())
        for (std::size_t m : {1, 2, 4, 8, 16}) values.push_back(m * n);
      if (windows.empty()) windows = {window};
      results = sweep_bins(a, values, windows, selection_config(n, 0, 1, seed, kind, "uniform"), sc);
    }
    emit(out_path, sweep_csv(results));
    json j = json::array();
    for (const auto& r : results) j.push_back(to_json(r));
    emit(report_path, pretty(j));
    if (out_path.empty() && report_path.empty()) std::fputs(sweep_csv(results).c_str(), stdout);
  } else if (*synth) {
    const auto s = generate_synthetic(mixture_preset(preset), rows, seed);
    emit(out_path, write_csv_text(s.data));
    if (!labels_path.empty()) {
      std::string labels = "region_id,component\n";
      for (std::size_t i = 0; i < s.labels.size(); ++i)
        labels += s.data.regions()[i].id + "," + std::to_string(s.labels[i]) + "\n";
      emit(labels_path, labels);
    }
    std::printf("rows=%zu\n", s.data.rows());
  } else if (*srv) {
    return serve(host, port, data.threads);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const repscape::Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    switch (e.kind()) {
      case repscape::ErrorKind::usage:
        return kExitUsage;
      case repscape::ErrorKind::data:
        return kExitData;
      case repscape::ErrorKind::computation:
        return kExitComputation;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitComputation;
}
