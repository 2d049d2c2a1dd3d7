#include "repscape/synthetic.hpp"

#include <cmath>

#include "repscape/error.hpp"
#include "repscape/random.hpp"

namespace repscape {

SyntheticDataset generate_synthetic(const MixtureSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw UsageError("synthetic dataset needs n >= 1");
  if (spec.variables.empty()) throw DataError("invalid_mixture", "mixture needs at least one variable");
  if (spec.components.empty()) throw DataError("invalid_mixture", "mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : spec.components) {
    if (!(c.weight >= 0.0)) throw DataError("invalid_mixture", "component weights must be non-negative");
    if (c.mean.size() != spec.variables.size() || c.stddev.size() != spec.variables.size())
      throw DataError("invalid_mixture", "component mean/stddev must have one entry per variable");
    for (double s : c.stddev)
      if (!(s >= 0.0)) throw DataError("invalid_mixture", "component stddev must be non-negative");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DataError("invalid_mixture", "component weights must sum to 1");

  const std::size_t grid_cols = static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * static_cast<double>(n))));
  const std::size_t grid_rows = (n + grid_cols - 1) / grid_cols;

  std::vector<Region> regions;
  std::vector<double> values;
  std::vector<std::size_t> labels;
  regions.reserve(n);
  values.reserve(n * spec.variables.size());
  labels.reserve(n);

  Rng rng(seed);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = k / grid_cols, c = k % grid_cols;
    regions.push_back({"g" + std::to_string(k), 90.0 - (static_cast<double>(r) + 0.5) * 180.0 / grid_rows,
                       -180.0 + (static_cast<double>(c) + 0.5) * 360.0 / grid_cols});

    const double u = uniform01(rng);
    std::size_t label = spec.components.size() - 1;
    double acc = 0.0;
    for (std::size_t j = 0; j < spec.components.size(); ++j) {
      acc += spec.components[j].weight;
      if (u < acc) {
        label = j;
        break;
      }
    }
    labels.push_back(label);
    const auto& comp = spec.components[label];
    for (std::size_t v = 0; v < spec.variables.size(); ++v)
      values.push_back(comp.mean[v] + comp.stddev[v] * standard_normal(rng));
  }

  std::vector<VariableSpec> vars;
  for (const auto& name : spec.variables) vars.push_back({name, VariableKind::continuous, std::nullopt});
  return {Dataset(std::move(regions), std::move(vars), std::move(values)), std::move(labels)};
}

MixtureSpec clustered_preset() {
  MixtureSpec spec;
  spec.variables = {"temperature", "market_access", "vegetation"};
  spec.components = {
      {0.52, {5.0, 0.20, 1.0}, {1.2, 0.030, 0.45}},
      {0.39, {12.0, 0.40, 4.0}, {1.2, 0.030, 0.45}},
      {0.035, {21.0, 0.65, 8.0}, {0.5, 0.012, 0.20}},
      {0.025, {30.0, 0.90, 11.0}, {0.5, 0.012, 0.20}},
      {0.03, {38.0, 1.10, 14.0}, {0.5, 0.012, 0.20}},
  };
  return spec;
}

MixtureSpec bimodal_preset() {
  MixtureSpec spec;
  spec.variables = {"x", "y"};
  spec.components = {
      {0.6, {0.0, 0.0}, {1.0, 1.0}},
      {0.4, {10.0, 10.0}, {1.0, 1.0}},
  };
  return spec;
}

MixtureSpec mixture_preset(const std::string& name) {
  if (name == "clustered") return clustered_preset();
  if (name == "bimodal") return bimodal_preset();
  throw UsageError("unknown mixture preset '" + name + "' (expected clustered or bimodal)");
}

}  // namespace repscape
