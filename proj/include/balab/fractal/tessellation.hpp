#pragma once

// Translate counts for the cube tessellation of the abelian horospherical
// group H = {L~_{A,b}} = R^{mn+m} under the expanding automorphism
// Phi_t (A -> e^{(1/m+1/n)t} A, b -> e^{t/m} b).
//
// V_r is the open cube of side r/sqrt(k') (k' = mn + m) centred at 0 and
// Lambda_r = (r/sqrt(k')) Z^{k'}. In cell units Phi_t(V_r) is the box with
// half-widths sigma/2 per axis, so the counts do not depend on r:
//
//   interior: translates contained in Phi_t(V_r)   (|g| <= h - 1/2 per axis)
//   boundary: translates meeting d Phi_t(V_r)      (meet minus interior)
//
// and interior <= vol ratio = e^{chi t} <= interior + boundary.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "balab/core/shells.hpp"
#include "balab/dynamics/flow.hpp"

namespace balab {

struct TessellationCounts {
  Integer interior;
  Integer boundary;
  Scalar volume_ratio;  // e^{chi t}
  double cell_side = 0;  // r / sqrt(k')
  std::vector<Scalar> scale;  // per-axis expansion (A entries first, then b)
  bool exact = false;
};

namespace detail {

struct AxisCount {
  Integer interior;
  Integer meet;
};

// Integers g with (g - 1/2, g + 1/2) inside / meeting (-h, h), h = sigma / 2.
inline AxisCount axis_count(const Scalar& sigma) {
  if (sigma.is_exact()) {
    const Rational h = sigma.rational() / 2;
    const Rational half(1, 2);
    AxisCount c;
    c.interior = h < half ? Integer(0) : Integer(2 * floor(Rational(h - half)) + 1);
    c.meet = 2 * ceil(Rational(h + half)) - 1;
    return c;
  }
  const double h = sigma.to_double() / 2;
  AxisCount c;
  c.interior = h < 0.5 ? Integer(0) : Integer(2 * Integer(std::floor(h - 0.5)) + 1);
  c.meet = 2 * Integer(std::ceil(h + 0.5)) - 1;
  return c;
}

inline std::optional<Rational> exact_power(const Rational& base, const Rational& exponent) {
  if (boost::multiprecision::denominator(exponent) != 1) return std::nullopt;
  return pow_exact(base, boost::multiprecision::numerator(exponent).convert_to<unsigned>());
}

inline TessellationCounts finish_counts(const FlowSpec& fs, double r, std::vector<Scalar> scale, Scalar volume) {
  if (!(r > 0 && r <= 1)) throw ParameterError("tessellation: r must lie in (0, 1]");
  TessellationCounts out;
  Integer interior = 1, meet = 1;
  out.exact = volume.is_exact();
  for (const auto& s : scale) {
    const AxisCount c = axis_count(s);
    interior *= c.interior;
    meet *= c.meet;
    out.exact = out.exact && s.is_exact();
  }
  out.interior = interior;
  out.boundary = meet - interior;
  out.volume_ratio = std::move(volume);
  out.cell_side = r / std::sqrt(static_cast<double>(fs.horospherical_dim()));
  out.scale = std::move(scale);
  return out;
}

}  // namespace detail

inline TessellationCounts tessellation_counts(const FlowSpec& fs, double r, double t) {
  if (!(t >= 0) || !std::isfinite(t)) throw ParameterError("tessellation: t must be finite and >= 0");
  const Scalar a_scale(std::exp(to_double(fs.matrix_rate()) * t));
  const Scalar b_scale(fs.expand(t));
  std::vector<Scalar> scale(fs.m() * fs.n(), a_scale);
  scale.insert(scale.end(), fs.m(), b_scale);
  return detail::finish_counts(fs, r, std::move(scale), Scalar(std::exp(to_double(fs.chi()) * t)));
}

/// Same with e^t given as an exact rational (t = ln growth). Axes whose
/// expansion exponent is integral are counted in exact arithmetic.
inline TessellationCounts tessellation_counts_exact(const FlowSpec& fs, double r, const Rational& growth) {
  if (growth < 1) throw ParameterError("tessellation: e^t must be >= 1");
  const double t = std::log(to_double(growth));
  auto axis = [&](const Rational& rate) {
    if (auto p = detail::exact_power(growth, rate)) return Scalar(*p);
    return Scalar(std::exp(to_double(rate) * t));
  };
  const Scalar a_scale = axis(fs.matrix_rate());
  const Scalar b_scale = axis(fs.expand_rate());
  std::vector<Scalar> scale(fs.m() * fs.n(), a_scale);
  scale.insert(scale.end(), fs.m(), b_scale);
  return detail::finish_counts(fs, r, std::move(scale), axis(fs.chi()));
}

/// Explicit translate lists (cell-index vectors), for small configurations.
struct TessellationTranslates {
  std::vector<IntPoint> interior;
  std::vector<IntPoint> boundary;
  std::vector<double> half_width;  // per axis, in cell units
};

inline TessellationTranslates tessellation_translates(const TessellationCounts& counts,
                                                      std::uint64_t budget = kDefaultBudget) {
  const Integer total = counts.interior + counts.boundary;
  if (total > Integer(budget))
    throw BudgetError("tessellation: translate count exceeds budget",
                      total > Integer(UINT64_MAX) ? UINT64_MAX : total.convert_to<std::uint64_t>(), budget);
  TessellationTranslates out;
  const std::size_t k = counts.scale.size();
  std::vector<std::int64_t> reach(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto c = detail::axis_count(counts.scale[i]);
    out.half_width.push_back(counts.scale[i].to_double() / 2);
    reach[i] = ((c.meet - 1) / 2).convert_to<std::int64_t>();
  }
  std::vector<std::int64_t> inner_reach(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto c = detail::axis_count(counts.scale[i]);
    inner_reach[i] = c.interior == 0 ? -1 : ((c.interior - 1) / 2).convert_to<std::int64_t>();
  }
  IntPoint g(k);
  for (std::size_t i = 0; i < k; ++i) g[i] = -reach[i];
  while (true) {
    bool inside = true;
    for (std::size_t i = 0; i < k; ++i) inside = inside && (g[i] < 0 ? -g[i] : g[i]) <= inner_reach[i];
    (inside ? out.interior : out.boundary).push_back(g);
    std::size_t i = 0;
    while (i < k && g[i] == reach[i]) g[i] = -reach[i], ++i;
    if (i == k) break;
    ++g[i];
  }
  return out;
}

}  // namespace balab
