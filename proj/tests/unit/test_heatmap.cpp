#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "repscape/error.hpp"
#include "repscape/heatmap.hpp"

using namespace repscape;

namespace {

HeatMapDocument random_document(std::size_t cells, std::uint64_t seed, std::size_t buckets = 10) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lat(-90.0, 90.0), lon(-180.0, 180.0);
  std::uniform_int_distribution<std::size_t> b(0, buckets - 1);
  const ColorScale scale(buckets);
  RepresentativenessReport report;
  report.scale = scale;
  report.r = 0.5;
  for (std::size_t i = 0; i < cells; ++i) {
    const auto bucket = b(rng);
    report.cells.push_back({"c" + std::to_string(i), lat(rng), lon(rng), 0.0,
                            static_cast<double>(bucket) / static_cast<double>(buckets), bucket});
  }
  SampleSet samples;
  samples.sites.push_back({"m0", 10.0, 20.0, 0.0, {}});
  std::vector<FilteredRegion> excluded = {{"x0", -45.0, 100.0}, {"x1", 60.0, -120.0}};
  return build_document(report, samples, excluded, scale);
}

// Nearest site by exhaustive search in pixel-center lat/lon space.
std::array<unsigned char, 3> brute_color(const HeatMapDocument& doc, double lat, double lon) {
  double best = INFINITY;
  std::array<unsigned char, 3> color{};
  auto consider = [&](double la, double lo, const std::string& hex) {
    const double d = (la - lat) * (la - lat) + (lo - lon) * (lo - lon);
    if (d < best) {
      best = d;
      color = parse_hex_color(hex);
    }
  };
  for (const auto& c : doc.cells) consider(c.lat, c.lon, doc.legend[c.bucket].color);
  for (const auto& f : doc.filtered_regions) consider(f.lat, f.lon, doc.filtered_color);
  return color;
}

}  // namespace

TEST_CASE("document carries report buckets, markers, legend and filtered regions") {
  RepresentativenessReport report;
  report.r = 1.0;
  report.scale = ColorScale();
  report.cells = {{"a", 1, 2, 0.0, 0.0, 0}, {"b", 3, 4, 0.0, 0.0, 0}};
  SampleSet s;
  s.sites.push_back({"a", 1, 2, 0.0, 0});
  const auto doc = build_document(report, s, {}, report.scale);
  CHECK(doc.cells.size() == 2);
  CHECK(doc.cells[0].bucket == 0);
  CHECK(doc.cells[1].bucket == 0);
  CHECK(doc.filtered_regions.empty());
  REQUIRE(doc.legend.size() == 10);
  CHECK(doc.legend.front().lo == 0.0);
  CHECK(doc.legend.back().hi == 1.0);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(doc.legend[i].lo == static_cast<double>(i) / 10.0);
    if (i > 0) CHECK(doc.legend[i].lo == doc.legend[i - 1].hi);
    CHECK(doc.legend[i].color != kFilteredColor);
  }
  CHECK(doc.markers == std::vector<Marker>{{"a", 1, 2}});
  CHECK(markers_csv(doc) == "id,lat,lon\na,1,2\n");
}

TEST_CASE("single cell renders a uniform image plus the marker") {
  RepresentativenessReport report;
  report.scale = ColorScale();
  report.cells = {{"a", 0.0, 0.0, 0.0, 0.35, 3}};
  SampleSet s;
  s.sites.push_back({"m", 0.0, 0.0, 0.0, {}});
  const auto doc = build_document(report, s, {}, report.scale);
  const auto img = render_raster(doc, 40, 20);
  const auto cell = parse_hex_color(report.scale.palette[3]);
  const auto mx = lon_to_x(0.0, 40), my = lat_to_y(0.0, 20);
  for (std::size_t y = 0; y < 20; ++y)
    for (std::size_t x = 0; x < 40; ++x) {
      const bool marker = (x + 1 >= mx && x <= mx + 1 && y + 1 >= my && y <= my + 1);
      CHECK(img.pixel(x, y) == (marker ? std::array<unsigned char, 3>{0, 0, 0} : cell));
    }
}

TEST_CASE("pixel at a cell's coordinates has that cell's color") {
  RepresentativenessReport report;
  report.scale = ColorScale(4);
  report.cells = {{"a", 45.0, -90.0, 0, 0, 0}, {"b", -45.0, 90.0, 0, 0, 3}, {"c", 0.0, 0.0, 0, 0, 2}};
  const auto doc = build_document(report, {}, {{"f", 60.0, 150.0}}, report.scale);
  const auto img = render_raster(doc, 360, 180);
  for (const auto& c : doc.cells)
    CHECK(img.pixel(lon_to_x(c.lon, 360), lat_to_y(c.lat, 180)) == parse_hex_color(report.scale.palette[c.bucket]));
  CHECK(img.pixel(lon_to_x(150.0, 360), lat_to_y(60.0, 180)) == parse_hex_color(kFilteredColor));
}

TEST_CASE("raster matches brute-force nearest cell") {
  auto doc = random_document(300, 5);
  doc.markers.clear();
  const std::size_t w = 90, h = 45;
  const auto img = render_raster(doc, w, h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      const double lat = 90.0 - (static_cast<double>(y) + 0.5) * 180.0 / static_cast<double>(h);
      const double lon = -180.0 + (static_cast<double>(x) + 0.5) * 360.0 / static_cast<double>(w);
      CHECK(img.pixel(x, y) == brute_color(doc, lat, lon));
    }
}

TEST_CASE("raster bytes do not depend on thread count") {
  const auto doc = random_document(2000, 9);
  const auto one = render_raster(doc, 300, 150, 1).to_ppm();
  CHECK(one == render_raster(doc, 300, 150, 4).to_ppm());
  CHECK(one == render_raster(doc, 300, 150, 1).to_ppm());
  CHECK(one.rfind("P6\n300 150\n255\n", 0) == 0);
  CHECK(one.size() == std::string("P6\n300 150\n255\n").size() + 300 * 150 * 3);
}

TEST_CASE("document JSON round trip") {
  const auto doc = random_document(50, 3, 7);
  const auto text = to_json(doc).dump();
  const auto back = heatmap_from_json(nlohmann::json::parse(text));
  CHECK(back == doc);
  CHECK(to_json(back).dump() == text);
}

TEST_CASE("coordinate mapping and colors") {
  CHECK(lon_to_x(-180.0, 360) == 0);
  CHECK(lon_to_x(179.999, 360) == 359);
  CHECK(lat_to_y(90.0, 180) == 0);
  CHECK(lat_to_y(-90.0, 180) == 179);
  CHECK(parse_hex_color("#00008b") == std::array<unsigned char, 3>{0, 0, 0x8b});
  CHECK_THROWS(parse_hex_color("blue"));
  CHECK_THROWS_AS(render_raster(HeatMapDocument{}, 0, 10), UsageError);
}
