#include "repscape/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "repscape/error.hpp"
#include "repscape/format.hpp"
#include "repscape/parallel.hpp"

namespace repscape {

HeatMapDocument build_document(const RepresentativenessReport& report, const SampleSet& samples,
                               const std::vector<FilteredRegion>& excluded, const ColorScale& scale) {
  HeatMapDocument doc;
  doc.r = report.r;
  doc.mode = to_string(report.mode);
  doc.cells.reserve(report.cells.size());
  for (const auto& c : report.cells) doc.cells.push_back({c.id, c.lat, c.lon, c.bucket, c.nfd});
  for (const auto& s : samples.sites) doc.markers.push_back({s.id, s.lat, s.lon});
  for (std::size_t i = 0; i < scale.bucket_count(); ++i)
    doc.legend.push_back({scale.palette[i], scale.lower_edge(i), scale.lower_edge(i + 1)});
  doc.filtered_regions = excluded;
  return doc;
}

std::array<unsigned char, 3> parse_hex_color(const std::string& hex) {
  if (hex.size() != 7 || hex[0] != '#') throw DataError("invalid_color", "expected #rrggbb, got '" + hex + "'");
  std::array<unsigned char, 3> out{};
  for (int c = 0; c < 3; ++c)
    out[c] = static_cast<unsigned char>(std::stoi(hex.substr(1 + 2 * c, 2), nullptr, 16));
  return out;
}

std::size_t lon_to_x(double lon, std::size_t width) {
  const double x = (lon + 180.0) / 360.0 * static_cast<double>(width);
  return std::min(width - 1, static_cast<std::size_t>(std::max(0.0, std::floor(x))));
}

std::size_t lat_to_y(double lat, std::size_t height) {
  const double y = (90.0 - lat) / 180.0 * static_cast<double>(height);
  return std::min(height - 1, static_cast<std::size_t>(std::max(0.0, std::floor(y))));
}

namespace {

struct Site {
  double lat, lon;
  std::array<unsigned char, 3> color;
};

/// Uniform lat/lon bucket grid for nearest-site queries.
class SiteGrid {
 public:
  explicit SiteGrid(const std::vector<Site>& sites) : sites_(sites) {
    const double target = std::max(1.0, std::sqrt(static_cast<double>(sites.size()) / 2.0));
    cols_ = static_cast<std::size_t>(std::ceil(target * std::sqrt(2.0)));
    rows_ = static_cast<std::size_t>(std::ceil(target / std::sqrt(2.0)));
    cell_w_ = 360.0 / static_cast<double>(cols_);
    cell_h_ = 180.0 / static_cast<double>(rows_);
    buckets_.resize(cols_ * rows_);
    for (std::size_t i = 0; i < sites.size(); ++i) buckets_[row_of(sites[i].lat) * cols_ + col_of(sites[i].lon)].push_back(i);
  }

  std::size_t nearest(double lat, double lon) const {
    const std::size_t r0 = row_of(lat), c0 = col_of(lon);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    const double step = std::min(cell_w_, cell_h_);
    const std::size_t max_ring = std::max(rows_, cols_);
    for (std::size_t ring = 0; ring <= max_ring; ++ring) {
      const long long rlo = static_cast<long long>(r0) - static_cast<long long>(ring);
      const long long rhi = static_cast<long long>(r0) + static_cast<long long>(ring);
      const long long clo = static_cast<long long>(c0) - static_cast<long long>(ring);
      const long long chi = static_cast<long long>(c0) + static_cast<long long>(ring);
      for (long long r = rlo; r <= rhi; ++r) {
        if (r < 0 || r >= static_cast<long long>(rows_)) continue;
        const bool edge_row = r == rlo || r == rhi;
        for (long long c = clo; c <= chi; c += (edge_row ? 1 : chi - clo)) {
          if (c >= 0 && c < static_cast<long long>(cols_)) {
            for (auto i : buckets_[static_cast<std::size_t>(r) * cols_ + static_cast<std::size_t>(c)]) {
              const double dlat = sites_[i].lat - lat, dlon = sites_[i].lon - lon;
              const double d = dlat * dlat + dlon * dlon;
              if (d < best || (d == best && i < best_i)) {
                best = d;
                best_i = i;
              }
            }
          }
          if (chi == clo) break;
        }
      }
      // Anything in ring+1 or beyond is at least ring * step away.
      const double bound = static_cast<double>(ring) * step;
      if (best < bound * bound) break;
    }
    return best_i;
  }

 private:
  std::size_t row_of(double lat) const {
    return std::min(rows_ - 1, static_cast<std::size_t>(std::max(0.0, std::floor((90.0 - lat) / cell_h_))));
  }
  std::size_t col_of(double lon) const {
    return std::min(cols_ - 1, static_cast<std::size_t>(std::max(0.0, std::floor((lon + 180.0) / cell_w_))));
  }

  const std::vector<Site>& sites_;
  std::size_t rows_ = 1, cols_ = 1;
  double cell_w_ = 360.0, cell_h_ = 180.0;
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace

std::string Raster::to_ppm() const {
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
  return out;
}

Raster render_raster(const HeatMapDocument& doc, std::size_t width, std::size_t height, unsigned threads) {
  if (width == 0 || height == 0) throw UsageError("raster width and height must be at least 1");
  std::vector<std::array<unsigned char, 3>> palette;
  for (const auto& e : doc.legend) palette.push_back(parse_hex_color(e.color));
  const auto filtered = parse_hex_color(doc.filtered_color);

  std::vector<Site> sites;
  sites.reserve(doc.cells.size() + doc.filtered_regions.size());
  for (const auto& c : doc.cells) {
    if (c.bucket >= palette.size()) throw DataError("invalid_document", "cell bucket outside the legend");
    sites.push_back({c.lat, c.lon, palette[c.bucket]});
  }
  for (const auto& f : doc.filtered_regions) sites.push_back({f.lat, f.lon, filtered});

  Raster img{width, height, std::vector<unsigned char>(width * height * 3, 0)};
  if (!sites.empty()) {
    const SiteGrid grid(sites);
    parallel_for(height, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t y = begin; y < end; ++y) {
        const double lat = 90.0 - (static_cast<double>(y) + 0.5) * 180.0 / static_cast<double>(height);
        for (std::size_t x = 0; x < width; ++x) {
          const double lon = -180.0 + (static_cast<double>(x) + 0.5) * 360.0 / static_cast<double>(width);
          const auto& color = sites[grid.nearest(lat, lon)].color;
          std::copy(color.begin(), color.end(), img.rgb.begin() + static_cast<std::ptrdiff_t>(3 * (y * width + x)));
        }
      }
    });
  }

  const auto marker = parse_hex_color(kMarkerColor);
  for (const auto& m : doc.markers) {
    const auto mx = static_cast<long long>(lon_to_x(m.lon, width));
    const auto my = static_cast<long long>(lat_to_y(m.lat, height));
    for (long long dy = -1; dy <= 1; ++dy)
      for (long long dx = -1; dx <= 1; ++dx) {
        const long long x = mx + dx, y = my + dy;
        if (x < 0 || y < 0 || x >= static_cast<long long>(width) || y >= static_cast<long long>(height)) continue;
        std::copy(marker.begin(), marker.end(),
                  img.rgb.begin() + static_cast<std::ptrdiff_t>(3 * (static_cast<std::size_t>(y) * width +
                                                                     static_cast<std::size_t>(x))));
      }
  }
  return img;
}

nlohmann::json to_json(const HeatMapDocument& doc) {
  nlohmann::json cells = nlohmann::json::array(), markers = nlohmann::json::array(),
                 legend = nlohmann::json::array(), filtered = nlohmann::json::array();
  for (const auto& c : doc.cells)
    cells.push_back({{"id", c.id}, {"lat", c.lat}, {"lon", c.lon}, {"bucket", c.bucket}, {"nfd", c.nfd}});
  for (const auto& m : doc.markers) markers.push_back({{"id", m.id}, {"lat", m.lat}, {"lon", m.lon}});
  for (const auto& e : doc.legend) legend.push_back({{"color", e.color}, {"lo", e.lo}, {"hi", e.hi}});
  for (const auto& f : doc.filtered_regions) filtered.push_back({{"id", f.id}, {"lat", f.lat}, {"lon", f.lon}});
  return {{"R", doc.r},          {"mode", doc.mode},
          {"legend", legend},    {"filtered_color", doc.filtered_color},
          {"markers", markers},  {"filtered_regions", filtered},
          {"cells", cells}};
}

HeatMapDocument heatmap_from_json(const nlohmann::json& j) {
  HeatMapDocument doc;
  try {
    doc.r = j.at("R").get<double>();
    doc.mode = j.at("mode").get<std::string>();
    doc.filtered_color = j.at("filtered_color").get<std::string>();
    for (const auto& c : j.at("cells"))
      doc.cells.push_back({c.at("id").get<std::string>(), c.at("lat").get<double>(), c.at("lon").get<double>(),
                           c.at("bucket").get<std::size_t>(), c.at("nfd").get<double>()});
    for (const auto& m : j.at("markers"))
      doc.markers.push_back({m.at("id").get<std::string>(), m.at("lat").get<double>(), m.at("lon").get<double>()});
    for (const auto& e : j.at("legend"))
      doc.legend.push_back({e.at("color").get<std::string>(), e.at("lo").get<double>(), e.at("hi").get<double>()});
    for (const auto& f : j.at("filtered_regions"))
      doc.filtered_regions.push_back(
          {f.at("id").get<std::string>(), f.at("lat").get<double>(), f.at("lon").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw DataError("invalid_document", std::string("malformed heat map JSON: ") + e.what());
  }
  return doc;
}

std::string markers_csv(const HeatMapDocument& doc) {
  std::string out = "id,lat,lon\n";
  for (const auto& m : doc.markers) out += m.id + "," + format_double(m.lat) + "," + format_double(m.lon) + "\n";
  return out;
}

}  // namespace repscape
