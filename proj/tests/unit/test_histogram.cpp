#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "repscape/error.hpp"
#include "repscape/histogram.hpp"

using namespace repscape;

namespace {

std::vector<double> uniform_scores(std::size_t n, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

void check_partition(const Histogram& h) {
  std::vector<int> seen(h.total(), 0);
  std::size_t sum = 0;
  for (std::size_t b = 0; b < h.bins(); ++b) {
    CHECK(h.members[b].size() == h.frequencies[b]);
    CHECK(std::is_sorted(h.members[b].begin(), h.members[b].end()));
    sum += h.frequencies[b];
    for (auto i : h.members[b]) {
      ++seen[i];
      CHECK(h.assignment[i] == b);
    }
  }
  CHECK(sum == h.total());
  CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
}

}  // namespace

TEST_CASE("equal width: p_max goes to the last bin") {
  const auto h = build_equal_width(make_projection({0.0, 0.5, 1.0}), 2);
  CHECK(h.frequencies == std::vector<std::size_t>{1, 2});
  CHECK(h.edges == std::vector<double>{0.0, 0.5, 1.0});
  check_partition(h);
}

TEST_CASE("one bin holds everything") {
  const auto p = make_projection({3.0, 1.0, 2.0});
  CHECK(build_equal_width(p, 1).frequencies == std::vector<std::size_t>{3});
  CHECK(build_equal_frequency(p, 1).frequencies == std::vector<std::size_t>{3});
  CHECK(build_equal_width(make_projection({2.0, 2.0}), 1).frequencies == std::vector<std::size_t>{2});
}

TEST_CASE("equal width: matches the per-point floor formula") {
  const auto scores = uniform_scores(1000, 17, -2.0, 3.0);
  const auto p = make_projection(scores);
  const auto h = build_equal_width(p, 10);
  check_partition(h);
  const double interval = (p.p_max - p.p_min) / 10.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    std::size_t expected = scores[i] == p.p_max ? 9 : static_cast<std::size_t>(std::floor((scores[i] - p.p_min) / interval));
    expected = std::min<std::size_t>(expected, 9);
    CHECK(h.assignment[i] == expected);
    CHECK(bin_of(h, scores[i]) == expected);
  }
  // Binomial counts; four standard deviations.
  for (auto f : h.frequencies) CHECK(std::fabs(static_cast<double>(f) - 100.0) <= 4.0 * std::sqrt(1000 * 0.1 * 0.9));
  for (std::size_t i = 1; i + 1 < h.edges.size(); ++i)
    CHECK(std::fabs((h.edges[i] - h.edges[i - 1]) - interval) <= 1e-12 * std::fabs(interval) + 1e-15);
}

TEST_CASE("equal width: degenerate projection") {
  try {
    build_equal_width(make_projection({1.0, 1.0, 1.0}), 3);
    FAIL("expected degenerate_projection");
  } catch (const ComputationError& e) {
    CHECK(e.code() == "degenerate_projection");
  }
}

TEST_CASE("equal frequency: 1..8 into 4 bins") {
  const auto h = build_equal_frequency(make_projection({8, 7, 6, 5, 4, 3, 2, 1}), 4);
  CHECK(h.frequencies == std::vector<std::size_t>{2, 2, 2, 2});
  CHECK(h.edges == std::vector<double>{1, 3, 5, 7, 8});
  check_partition(h);
}

TEST_CASE("equal frequency: all ties still split by rank") {
  const auto h = build_equal_frequency(make_projection(std::vector<double>(11, 4.0)), 3);
  const auto [lo, hi] = std::minmax_element(h.frequencies.begin(), h.frequencies.end());
  CHECK(*hi - *lo <= 1);
  check_partition(h);
  for (std::size_t i = 1; i < h.edges.size(); ++i) CHECK(h.edges[i - 1] <= h.edges[i]);
}

TEST_CASE("equal frequency: sort-and-slice oracle") {
  const auto scores = uniform_scores(1001, 23);
  const auto h = build_equal_frequency(make_projection(scores), 10);
  const auto [lo, hi] = std::minmax_element(h.frequencies.begin(), h.frequencies.end());
  CHECK(*hi - *lo <= 1);
  check_partition(h);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  for (std::size_t b = 0; b < 10; ++b)
    for (std::size_t r = b * 1001 / 10; r < (b + 1) * 1001 / 10; ++r) CHECK(h.assignment[order[r]] == b);
  for (std::size_t i = 0; i < scores.size(); ++i) CHECK(bin_of(h, scores[i]) == h.assignment[i]);
}

TEST_CASE("equal frequency: too many bins") {
  CHECK_THROWS_AS(build_equal_frequency(make_projection({1, 2}), 3), Error);
}

TEST_CASE("bin_of: extremes and clamping") {
  const auto h = build_equal_width(make_projection({0, 1, 2, 3, 4}), 4);
  CHECK(bin_of(h, 0.0) == 0);
  CHECK(bin_of(h, 4.0) == 3);
  CHECK(bin_of(h, -10.0) == 0);
  CHECK(bin_of(h, 10.0) == 3);
  CHECK(bin_of(h, 2.5) == 2);
  const auto q = build_equal_frequency(make_projection({0, 1, 2, 3, 4, 5, 6, 7}), 4);
  CHECK(bin_of(q, -1.0) == 0);
  CHECK(bin_of(q, 100.0) == 3);
}

TEST_CASE("windows") {
  WindowPartition w1(6, 1);
  for (std::size_t b = 0; b < 6; ++b) CHECK(window_of(w1, b) == b);
  WindowPartition w2(5, 2);
  CHECK(w2.window_count() == 2);
  CHECK(window_of(w2, 4) == 1);
  WindowPartition w5(15, 5);
  CHECK(window_of(w5, 12) == 2);
  WindowPartition w3(17, 3);
  for (std::size_t b = 1; b < 17; ++b) CHECK(window_of(w3, b - 1) <= window_of(w3, b));
  CHECK(window_of(w3, 16) == w3.window_count() - 1);
  CHECK_THROWS_AS(WindowPartition(4, 0), UsageError);
  CHECK_THROWS_AS(WindowPartition(4, 5), UsageError);
}

TEST_CASE("histogram JSON carries kind, edges and frequencies") {
  const auto h = build_equal_frequency(make_projection({1, 2, 3, 4}), 2);
  const auto j = to_json(h);
  CHECK(j.at("kind") == "equal-frequency");
  CHECK(j.at("frequencies") == nlohmann::json::array({2, 2}));
  CHECK(j.at("edges").size() == 3);
  CHECK(parse_histogram_kind("equal-width") == HistogramKind::equal_width);
  CHECK(parse_histogram_kind("frequency") == HistogramKind::equal_frequency);
  CHECK_THROWS_AS(parse_histogram_kind("log"), UsageError);
}
