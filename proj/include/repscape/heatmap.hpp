#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "repscape/representativeness.hpp"

namespace repscape {

/// Reserved color for regions removed by the filter. Not in any palette
/// produced by ColorScale.
inline constexpr const char* kFilteredColor = "#00008b";
inline constexpr const char* kMarkerColor = "#000000";

struct HeatCell {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;
  std::size_t bucket = 0;
  double nfd = 0.0;

  bool operator==(const HeatCell&) const = default;
};

struct Marker {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const Marker&) const = default;
};

struct LegendEntry {
  std::string color;
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const LegendEntry&) const = default;
};

struct FilteredRegion {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const FilteredRegion&) const = default;
};

struct HeatMapDocument {
  double r = 0.0;
  std::string mode;
  std::vector<HeatCell> cells;
  std::vector<Marker> markers;
  std::vector<LegendEntry> legend;
  std::vector<FilteredRegion> filtered_regions;
  std::string filtered_color = kFilteredColor;

  bool operator==(const HeatMapDocument&) const = default;
};

HeatMapDocument build_document(const RepresentativenessReport& report, const SampleSet& samples,
                               const std::vector<FilteredRegion>& excluded, const ColorScale& scale);

struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<unsigned char> rgb;  // row-major, 3 bytes per pixel

  /// Binary PPM (P6).
  std::string to_ppm() const;
  std::array<unsigned char, 3> pixel(std::size_t x, std::size_t y) const {
    const std::size_t o = 3 * (y * width + x);
    return {rgb[o], rgb[o + 1], rgb[o + 2]};
  }
};

/// Equirectangular render: pixel centers map linearly to lon/lat, each
/// pixel takes the color of the nearest cell (filtered regions included,
/// in the reserved color; ties go to the earlier cell). Markers are drawn
/// on top as 3x3 dots. Output does not depend on `threads`.
Raster render_raster(const HeatMapDocument& doc, std::size_t width, std::size_t height, unsigned threads = 1);

/// Pixel column/row whose area contains the coordinate.
std::size_t lon_to_x(double lon, std::size_t width);
std::size_t lat_to_y(double lat, std::size_t height);

std::array<unsigned char, 3> parse_hex_color(const std::string& hex);

nlohmann::json to_json(const HeatMapDocument& doc);
HeatMapDocument heatmap_from_json(const nlohmann::json& j);

/// `id,lat,lon` rows for the sample markers.
std::string markers_csv(const HeatMapDocument& doc);

}  // namespace repscape
