#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repscape/dataset.hpp"

namespace repscape {

struct MixtureComponent {
  double weight = 1.0;
  std::vector<double> mean;    // one per variable
  std::vector<double> stddev;  // one per variable
};

/// Gaussian mixture over a fixed set of variables.
struct MixtureSpec {
  std::vector<std::string> variables;
  std::vector<MixtureComponent> components;
};

struct SyntheticDataset {
  Dataset data;
  std::vector<std::size_t> labels;  // generating component per row
};

/// Draws `n` regions from the mixture. Regions sit row-major on an
/// equirectangular lat/lon grid covering the globe; ids are `g<k>`.
/// Deterministic for a fixed seed.
SyntheticDataset generate_synthetic(const MixtureSpec& spec, std::size_t n, std::uint64_t seed);

/// Five-component, three-variable clustered mixture: two heavy modes and
/// three light, tight modes strung along one diagonal.
MixtureSpec clustered_preset();

/// Two well-separated components over two variables.
MixtureSpec bimodal_preset();

MixtureSpec mixture_preset(const std::string& name);

}  // namespace repscape
