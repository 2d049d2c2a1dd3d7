#include "repscape/selection.hpp"

#include <unordered_set>

#include "repscape/error.hpp"
#include "repscape/parallel.hpp"

namespace repscape {

std::vector<std::size_t> Selection::regions() const {
  std::vector<std::size_t> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.region);
  return out;
}

Selection select_ideal(const Histogram& h, const WindowPartition& wp, const SelectionConfig& cfg) {
  if (h.bins() == 0 || h.total() == 0) throw DataError("empty_histogram", "cannot select sites from an empty histogram");
  if (wp.bins != h.bins()) throw UsageError("window partition does not match histogram bins");
  if (cfg.n_sites == 0) throw UsageError("n_sites must be at least 1");

  Rng rng(cfg.seed);
  std::vector<bool> used(wp.window_count(), false);
  Selection out;
  for (std::size_t round = 0; round < cfg.n_sites; ++round) {
    long long best = -1;
    std::size_t best_bucket = 0;
    for (std::size_t k = 0; k < h.bins(); ++k) {
      const auto freq = static_cast<long long>(h.frequencies[k]);
      if (freq >= best && !used[window_of(wp, k)]) {
        best = freq;
        best_bucket = k;
      }
    }
    if (best <= 0) {
      out.truncated = true;
      break;
    }
    const std::size_t window = window_of(wp, best_bucket);
    used[window] = true;
    const auto& members = h.members[best_bucket];
    const std::size_t pick =
        cfg.draw == MemberDraw::median ? (members.size() - 1) / 2 : uniform_index(rng, members.size());
    out.steps.push_back({best_bucket, window, members[pick]});
  }
  return out;
}

std::vector<std::size_t> draw_distinct(std::size_t rows, std::size_t k, Rng& rng) {
  std::vector<std::size_t> out;
  out.reserve(k);
  std::unordered_set<std::size_t> taken;
  taken.reserve(k * 2);
  for (std::size_t j = rows - k; j < rows; ++j) {
    const auto t = static_cast<std::size_t>(uniform_index(rng, j + 1));
    if (taken.insert(t).second) {
      out.push_back(t);
    } else {
      taken.insert(j);
      out.push_back(j);
    }
  }
  return out;
}

BaselineResult random_baseline(std::size_t rows, const BaselineConfig& cfg, const SampleScorer& scorer) {
  if (cfg.trials == 0) throw UsageError("baseline needs at least 1 trial");
  if (cfg.n_sites == 0) throw UsageError("n_sites must be at least 1");
  if (cfg.n_sites > rows)
    throw UsageError("n_sites (" + std::to_string(cfg.n_sites) + ") exceeds the region count (" +
                                            std::to_string(rows) + ")");
  BaselineResult out;
  out.trials = cfg.trials;
  out.seed = cfg.seed;
  out.r_values.assign(cfg.trials, 0.0);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      Rng rng(substream_seed(cfg.seed, t));
      const auto sample = draw_distinct(rows, cfg.n_sites, rng);
      out.r_values[t] = scorer(sample);
    }
  });
  double sum = 0.0;
  for (double r : out.r_values) sum += r;
  out.mean_r = sum / static_cast<double>(cfg.trials);
  return out;
}

double percentile_of(const BaselineResult& b, double r) {
  if (b.r_values.empty()) throw UsageError("baseline has no trials");
  std::size_t below = 0;
  for (double v : b.r_values)
    if (v < r) ++below;
  return 100.0 * static_cast<double>(below) / static_cast<double>(b.r_values.size());
}

nlohmann::json to_json(const BaselineResult& b) {
  return {{"trials", b.trials}, {"seed", b.seed}, {"r_values", b.r_values}, {"mean_r", b.mean_r}};
}

}  // namespace repscape
