#pragma once

// Hausdorff-dimension lower bounds for limit sets of strongly tree-like
// collections:
//
//   dim >= k - limsup_j (sum_{i<=j} log delta_i) / log d_j
//
// evaluated on finite level data at the last level J. The full ratio sequence
// is returned so the trend can be inspected; nothing is extrapolated.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "balab/core/errors.hpp"
#include "balab/core/scalar.hpp"

namespace balab {

struct TreeLevelData {
  std::size_t k = 1;           // ambient dimension
  std::vector<double> deltas;  // per-level densities in (0, 1]
  std::vector<double> diams;   // per-level diameters > 0

  /// delta_j = delta and d_j = ratio^j for j = 1..levels.
  static TreeLevelData geometric(std::size_t k, double delta, double ratio, std::size_t levels) {
    TreeLevelData d{k, {}, {}};
    for (std::size_t j = 1; j <= levels; ++j) {
      d.deltas.push_back(delta);
      d.diams.push_back(std::pow(ratio, static_cast<double>(j)));
    }
    return d;
  }
};

struct TreeBound {
  double bound = 0;
  std::vector<double> ratios;  // NaN at levels whose diameter is >= 1
  bool diameter_warning = false;  // diameters not shrinking (d_J >= d_1 or not monotone)
};

inline TreeBound tree_dim_lower_bound(const TreeLevelData& data) {
  const std::size_t levels = data.deltas.size();
  if (data.k == 0) throw ParameterError("tree bound: ambient dimension k must be positive");
  if (levels == 0 || data.diams.size() != levels)
    throw ParameterError("tree bound: need equally many densities and diameters (at least one level)");
  for (std::size_t j = 0; j < levels; ++j) {
    if (!(data.deltas[j] > 0 && data.deltas[j] <= 1))
      throw ParameterError("tree bound: density at level " + std::to_string(j + 1) + " is outside (0, 1]");
    if (!(data.diams[j] > 0)) throw ParameterError("tree bound: diameter at level " + std::to_string(j + 1) + " is not positive");
  }
  if (!(data.diams.back() < 1))
    throw ParameterError("tree bound: diameter at the evaluated level is >= 1");

  TreeBound out;
  out.ratios.reserve(levels);
  double log_density = 0;
  for (std::size_t j = 0; j < levels; ++j) {
    log_density += std::log(data.deltas[j]);
    out.ratios.push_back(data.diams[j] < 1 ? log_density / std::log(data.diams[j])
                                           : std::numeric_limits<double>::quiet_NaN());
    if (j > 0 && data.diams[j] > data.diams[j - 1]) out.diameter_warning = true;
  }
  if (levels > 1 && !(data.diams.back() < data.diams.front())) out.diameter_warning = true;
  out.bound = static_cast<double>(data.k) - out.ratios.back();
  return out;
}

/// k - log(1 / mu) / (lambda t - log 4), the dimension bound produced by the
/// tessellation construction with surviving measure fraction mu.
inline double construction_bound(std::size_t k, double mu, double lambda, double t) {
  if (!(mu > 0 && mu <= 1)) throw ParameterError("construction bound: measure fraction must lie in (0, 1]");
  if (!(lambda > 0)) throw ParameterError("construction bound: lambda must be positive");
  const double denom = lambda * t - std::log(4.0);
  if (!(denom > 0)) throw ParameterError("construction bound: needs lambda * t > log 4, got " + format_double(lambda * t));
  return static_cast<double>(k) - std::log(1.0 / mu) / denom;
}

}  // namespace balab
