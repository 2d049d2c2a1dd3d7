#include "repscape/representativeness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "repscape/error.hpp"

namespace repscape {

namespace {

constexpr std::array<std::array<int, 3>, 10> kDefaultPalette{{
    {0x1a, 0x98, 0x50}, {0x66, 0xbd, 0x63}, {0xa6, 0xd9, 0x6a}, {0xd9, 0xef, 0x8b}, {0xff, 0xff, 0xbf},
    {0xfe, 0xe0, 0x8b}, {0xfd, 0xae, 0x61}, {0xf4, 0x6d, 0x43}, {0xd7, 0x30, 0x27}, {0xa5, 0x00, 0x26},
}};

std::string hex_color(int r, int g, int b) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::vector<std::string> interpolated_palette(std::size_t buckets) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < buckets; ++i) {
    const double t = buckets == 1 ? 0.0 : static_cast<double>(i) * 9.0 / static_cast<double>(buckets - 1);
    const auto lo = static_cast<std::size_t>(std::floor(t));
    const std::size_t hi = std::min<std::size_t>(lo + 1, 9);
    const double f = t - static_cast<double>(lo);
    std::array<int, 3> rgb{};
    for (int c = 0; c < 3; ++c)
      rgb[c] = static_cast<int>(std::lround(kDefaultPalette[lo][c] * (1.0 - f) + kDefaultPalette[hi][c] * f));
    out.push_back(hex_color(rgb[0], rgb[1], rgb[2]));
  }
  return out;
}

}  // namespace

std::vector<double> SampleSet::scores() const {
  std::vector<double> out;
  out.reserve(sites.size());
  for (const auto& s : sites) out.push_back(s.score);
  return out;
}

ColorScale::ColorScale() : ColorScale(std::size_t{10}) {}

ColorScale::ColorScale(std::size_t buckets) {
  if (buckets < 2) throw UsageError("color scale needs at least 2 buckets");
  palette = interpolated_palette(buckets);
}

ColorScale::ColorScale(std::vector<std::string> colors) : palette(std::move(colors)) {
  if (palette.size() < 2) throw UsageError("color scale needs at least 2 buckets");
}

std::string to_string(ScoreMode mode) { return mode == ScoreMode::heat_scale ? "heat-scale" : "window-coverage"; }

std::string to_string(Method method) {
  switch (method) {
    case Method::given: return "given";
    case Method::ideal: return "ideal";
    case Method::random: return "random";
  }
  return "given";
}

ScoreMode parse_score_mode(const std::string& text) {
  if (text == "heat-scale" || text == "heat") return ScoreMode::heat_scale;
  if (text == "window-coverage" || text == "coverage") return ScoreMode::window_coverage;
  throw UsageError("unknown scoring mode '" + text + "' (expected heat-scale or window-coverage)");
}

std::vector<double> final_distance(const Projection& p, const SampleSet& s) {
  if (s.empty()) throw DataError("empty_sample_set", "sample set is empty");
  auto sorted = s.scores();
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> fd(p.values.size());
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    const double x = p.values[i];
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    double best = std::numeric_limits<double>::infinity();
    if (it != sorted.end()) best = std::abs(x - *it);
    if (it != sorted.begin()) best = std::min(best, std::abs(x - *std::prev(it)));
    fd[i] = best;
  }
  return fd;
}

std::vector<double> normalize_distances(const std::vector<double>& fd, const Projection& p,
                                        std::vector<std::size_t>* clamped) {
  const double range = p.p_max - p.p_min;
  if (!(range > 0.0))
    throw ComputationError("degenerate_projection", "PC1 range is zero; distances cannot be normalized");
  std::vector<double> nfd(fd.size());
  for (std::size_t i = 0; i < fd.size(); ++i) {
    const double v = fd[i] / range;
    if (v > 1.0) {
      nfd[i] = 1.0;
      if (clamped) clamped->push_back(i);
    } else {
      nfd[i] = v;
    }
  }
  return nfd;
}

std::size_t bucket_of(double nfd, const ColorScale& scale) {
  const std::size_t b_count = scale.bucket_count();
  if (!(nfd > 0.0)) return 0;
  const double raw = std::floor(nfd * static_cast<double>(b_count));
  std::size_t b = raw >= static_cast<double>(b_count - 1) ? b_count - 1 : static_cast<std::size_t>(raw);
  // The product can round across a boundary; settle against the exact edges.
  while (b + 1 < b_count && nfd >= scale.lower_edge(b + 1)) ++b;
  while (b > 0 && nfd < scale.lower_edge(b)) --b;
  return b;
}

std::vector<std::size_t> bucket_distances(const std::vector<double>& nfd, const ColorScale& scale) {
  std::vector<std::size_t> out(nfd.size());
  for (std::size_t i = 0; i < nfd.size(); ++i) out[i] = bucket_of(nfd[i], scale);
  return out;
}

double score_heat(const std::vector<double>& nfd, const ColorScale& scale) {
  if (nfd.empty()) return 0.0;
  std::size_t in_first = 0;
  for (double v : nfd)
    if (bucket_of(v, scale) == 0) ++in_first;
  return static_cast<double>(in_first) / static_cast<double>(nfd.size());
}

std::vector<std::size_t> sample_bins(const Histogram& h, const SampleSet& s) {
  std::vector<std::size_t> out;
  out.reserve(s.size());
  for (const auto& site : s.sites) {
    if (site.row && *site.row < h.assignment.size())
      out.push_back(h.assignment[*site.row]);
    else
      out.push_back(bin_of(h, site.score));
  }
  return out;
}

double score_window_coverage(const Histogram& h, const WindowPartition& wp, const std::vector<std::size_t>& bins) {
  if (h.total() == 0) return 0.0;
  if (wp.bins != h.bins()) throw UsageError("window partition does not match histogram bins");
  std::vector<bool> covered(wp.window_count(), false);
  for (auto b : bins) covered[window_of(wp, b)] = true;
  std::size_t sum = 0;
  for (std::size_t b = 0; b < h.bins(); ++b)
    if (covered[window_of(wp, b)]) sum += h.frequencies[b];
  return static_cast<double>(sum) / static_cast<double>(h.total());
}

double score_window_coverage(const Histogram& h, const WindowPartition& wp, const SampleSet& s) {
  return score_window_coverage(h, wp, sample_bins(h, s));
}

RepresentativenessReport evaluate(const Dataset& analyzed, const Projection& p, const SampleSet& s, ScoreMode mode,
                                  const ColorScale& scale, Method method, const std::optional<Histogram>& coverage_hist,
                                  const std::optional<WindowPartition>& coverage_windows) {
  if (analyzed.rows() != p.values.size())
    throw DataError("dimension_mismatch", "projection length does not match the analyzed dataset");
  RepresentativenessReport report;
  report.mode = mode;
  report.method = method;
  report.scale = scale;

  const auto fd = final_distance(p, s);
  std::vector<std::size_t> clamped;
  const auto nfd = normalize_distances(fd, p, &clamped);
  const auto buckets = bucket_distances(nfd, scale);
  report.cells.resize(fd.size());
  std::size_t in_first = 0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    const auto& region = analyzed.regions()[i];
    report.cells[i] = {region.id, region.lat, region.lon, fd[i], nfd[i], buckets[i]};
    if (buckets[i] == 0) ++in_first;
  }
  for (auto i : clamped) report.clamped.push_back(analyzed.regions()[i].id);

  if (mode == ScoreMode::heat_scale) {
    report.r = static_cast<double>(in_first) / static_cast<double>(fd.size());
  } else {
    if (!coverage_hist || !coverage_windows)
      throw UsageError("window-coverage scoring needs a histogram and window partition");
    report.r = score_window_coverage(*coverage_hist, *coverage_windows, s);
  }
  return report;
}

nlohmann::json to_json(const ColorScale& scale) {
  return {{"buckets", scale.bucket_count()}, {"palette", scale.palette}};
}

ColorScale color_scale_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return ColorScale(j.get<std::size_t>());
  if (j.contains("palette")) return ColorScale(j.at("palette").get<std::vector<std::string>>());
  return ColorScale(j.value("buckets", std::size_t{10}));
}

nlohmann::json to_json(const RepresentativenessReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells)
    cells.push_back({{"id", c.id}, {"lat", c.lat}, {"lon", c.lon}, {"fd", c.fd}, {"nfd", c.nfd}, {"bucket", c.bucket}});
  return {{"mode", to_string(report.mode)},
          {"method", to_string(report.method)},
          {"R", report.r},
          {"scale", to_json(report.scale)},
          {"clamped", report.clamped},
          {"cells", std::move(cells)}};
}

}  // namespace repscape
