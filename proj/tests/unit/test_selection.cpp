#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "repscape/error.hpp"
#include "repscape/representativeness.hpp"
#include "repscape/selection.hpp"

using namespace repscape;

namespace {

Histogram from_frequencies(const std::vector<std::size_t>& freq) {
  Histogram h;
  h.frequencies = freq;
  h.members.resize(freq.size());
  h.edges.resize(freq.size() + 1);
  for (std::size_t b = 0; b <= freq.size(); ++b) h.edges[b] = static_cast<double>(b);
  for (std::size_t b = 0; b < freq.size(); ++b)
    for (std::size_t k = 0; k < freq[b]; ++k) {
      h.members[b].push_back(h.assignment.size());
      h.assignment.push_back(b);
    }
  return h;
}

std::vector<std::size_t> buckets_of(const Selection& s) {
  std::vector<std::size_t> out;
  for (const auto& st : s.steps) out.push_back(st.bucket);
  return out;
}

Selection run(const std::vector<std::size_t>& freq, std::size_t w, std::size_t n, std::uint64_t seed = 0) {
  SelectionConfig cfg;
  cfg.n_sites = n;
  cfg.window = w;
  cfg.bins = freq.size();
  cfg.seed = seed;
  return select_ideal(from_frequencies(freq), WindowPartition(freq.size(), w), cfg);
}

}  // namespace

TEST_CASE("hand traces") {
  const auto a = run({5, 1, 3, 2}, 1, 2);
  CHECK(buckets_of(a) == std::vector<std::size_t>{0, 2});
  CHECK_FALSE(a.truncated);
  const auto b = run({5, 4, 1, 2}, 2, 2);
  CHECK(buckets_of(b) == std::vector<std::size_t>{0, 3});
  CHECK(b.steps[1].window == 1);
  const auto c = run({3, 0, 0, 0}, 1, 3);
  CHECK(buckets_of(c) == std::vector<std::size_t>{0});
  CHECK(c.truncated);
  // Ties go to the later bucket.
  CHECK(buckets_of(run({2, 2, 2}, 1, 1)) == std::vector<std::size_t>{2});
}

TEST_CASE("matches the literal pseudocode on random histograms") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 1000; ++t) {
    std::uniform_int_distribution<std::size_t> bins_d(1, 8), freq_d(0, 5), w_d(1, 3), n_d(1, 8);
    const std::size_t bins = bins_d(rng);
    std::vector<std::size_t> freq(bins);
    for (auto& f : freq) f = freq_d(rng);
    if (std::all_of(freq.begin(), freq.end(), [](auto f) { return f == 0; })) freq[0] = 1;
    const std::size_t w = std::min(w_d(rng), bins);
    const std::size_t n = n_d(rng);
    const auto got = run(freq, w, n, static_cast<std::uint64_t>(t));
    const auto want = oracle::greedy_trace(freq, w, n);
    REQUIRE(got.steps.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(got.steps[i].bucket == want[i].bucket);
      CHECK(got.steps[i].window == want[i].window);
    }
    std::set<std::size_t> windows;
    const auto h = from_frequencies(freq);
    for (const auto& st : got.steps) {
      CHECK(windows.insert(st.window).second);
      CHECK(freq[st.bucket] >= 1);
      CHECK(std::count(h.members[st.bucket].begin(), h.members[st.bucket].end(), st.region) == 1);
    }
    const WindowPartition wp(bins, w);
    std::set<std::size_t> nonempty;
    for (std::size_t b = 0; b < bins; ++b)
      if (freq[b] > 0) nonempty.insert(window_of(wp, b));
    CHECK(got.steps.size() == std::min(n, nonempty.size()));
    CHECK(got.truncated == (n > nonempty.size()));
  }
}

TEST_CASE("W = 1 greedy is optimal over every bucket subset") {
  std::mt19937_64 rng(7);
  for (std::size_t bins = 1; bins <= 10; ++bins)
    for (std::size_t n = 1; n <= std::min<std::size_t>(4, bins); ++n)
      for (int t = 0; t < 20; ++t) {
        std::uniform_int_distribution<std::size_t> f(0, 9);
        std::vector<std::size_t> freq(bins);
        for (auto& x : freq) x = f(rng);
        if (std::all_of(freq.begin(), freq.end(), [](auto x) { return x == 0; })) freq[bins - 1] = 3;
        const auto h = from_frequencies(freq);
        const auto sel = run(freq, 1, n);
        const double got = score_window_coverage(h, WindowPartition(bins, 1), buckets_of(sel));
        CHECK(got == doctest::Approx(oracle::best_coverage(freq, 1, n)).epsilon(1e-15));
      }
}

TEST_CASE("member draw is seeded; median draw is fixed") {
  const std::vector<std::size_t> freq = {50, 10, 30};
  CHECK(run(freq, 1, 3, 9).regions() == run(freq, 1, 3, 9).regions());
  bool differs = false;
  for (std::uint64_t s = 1; s < 20 && !differs; ++s) differs = run(freq, 1, 3, 0).regions() != run(freq, 1, 3, s).regions();
  CHECK(differs);
  SelectionConfig cfg;
  cfg.n_sites = 1;
  cfg.draw = MemberDraw::median;
  const auto h = from_frequencies({5});
  CHECK(select_ideal(h, WindowPartition(1, 1), cfg).steps[0].region == 2);
}

TEST_CASE("selection errors") {
  SelectionConfig cfg;
  CHECK_THROWS_AS(select_ideal(Histogram{}, WindowPartition(), cfg), DataError);
  cfg.n_sites = 0;
  CHECK_THROWS_AS(select_ideal(from_frequencies({1}), WindowPartition(1, 1), cfg), UsageError);
}

TEST_CASE("draw_distinct gives k distinct rows in range") {
  Rng rng(3);
  for (std::size_t k = 0; k <= 20; ++k) {
    const auto d = draw_distinct(20, k, rng);
    CHECK(d.size() == k);
    CHECK(std::set<std::size_t>(d.begin(), d.end()).size() == k);
    for (auto r : d) CHECK(r < 20);
  }
}

TEST_CASE("draw_distinct is uniform over rows") {
  Rng rng(11);
  std::vector<double> hits(10, 0.0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t)
    for (auto r : draw_distinct(10, 3, rng)) hits[r] += 1.0;
  for (double h : hits) CHECK(std::fabs(h / trials - 0.3) < 0.015);
}

TEST_CASE("baseline basics") {
  auto count_scorer = [](std::span<const std::size_t> rows) { return static_cast<double>(rows.size()) / 5.0; };
  const auto full = random_baseline(5, {5, 3, 1, 1}, count_scorer);
  CHECK(full.r_values == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(full.mean_r == 1.0);
  CHECK_THROWS_AS(random_baseline(5, {6, 1, 1, 1}, count_scorer), UsageError);
  CHECK_THROWS_AS(random_baseline(5, {1, 0, 1, 1}, count_scorer), UsageError);

  auto first_row = [](std::span<const std::size_t> rows) { return static_cast<double>(*std::min_element(rows.begin(), rows.end())); };
  const auto a = random_baseline(100, {4, 50, 17, 1}, first_row);
  const auto b = random_baseline(100, {4, 50, 17, 4}, first_row);
  CHECK(a.r_values == b.r_values);
  double sum = 0.0;
  for (double r : a.r_values) sum += r;
  CHECK(std::fabs(a.mean_r - sum / 50.0) <= 1e-12);
  CHECK(to_json(a).at("r_values").size() == 50);
  CHECK(to_json(a).at("seed") == 17);
}

TEST_CASE("percentile convention") {
  BaselineResult b;
  b.trials = 1000;
  for (int i = 0; i < 1000; ++i) b.r_values.push_back(static_cast<double>(i) / 1000.0);
  CHECK(percentile_of(b, -1.0) == 0.0);
  CHECK(percentile_of(b, 2.0) == 100.0);
  CHECK(percentile_of(b, 0.48) == doctest::Approx(48.0));
  CHECK(percentile_of(b, 0.4805) == doctest::Approx(48.1));
}

TEST_CASE("baseline mean agrees with an independent sampler") {
  // Bimodal scores; heat-scale scoring done by the oracle on both sides.
  std::mt19937_64 gen(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> xs(2000);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = (i % 5 < 3 ? 0.0 : 10.0) + g(gen);
  const std::size_t n = 4, trials = 1000;
  auto scorer = [&](std::span<const std::size_t> rows) {
    std::vector<double> s;
    for (auto r : rows) s.push_back(xs[r]);
    return oracle::heat_r(xs, s, 10);
  };
  const auto engine = random_baseline(xs.size(), {n, trials, 99, 2}, scorer);
  std::vector<double> ref;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(substream_seed(99, t));
    ref.push_back(scorer(oracle::sample_rows(xs.size(), n, rng)));
  }
  double ref_mean = 0.0;
  for (double r : ref) ref_mean += r;
  ref_mean /= static_cast<double>(trials);
  // Two independent estimates of the same mean; four standard errors.
  const double se = std::sqrt((oracle::variance(engine.r_values) + oracle::variance(ref)) / static_cast<double>(trials));
  CHECK(std::fabs(engine.mean_r - ref_mean) <= 4.0 * se);
}
