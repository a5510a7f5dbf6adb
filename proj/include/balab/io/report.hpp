#pragma once

// JSON reports shared by the CLI:
//   { "kind", "witness", "value", "N", "Q", "exact" }
// "value" is always a JSON number; exact results also carry "value_exact"
// in "num/den" form.

#include <ostream>
#include <string>

#include "json.hpp"

#include "balab/dynamics/orbit.hpp"
#include "balab/fractal/boxcount.hpp"
#include "balab/fractal/tessellation.hpp"
#include "balab/fractal/tree.hpp"

namespace balab::io {

using nlohmann::json;

inline json integer_json(const Integer& z) {
  if (z >= Integer(INT64_MIN) && z <= Integer(INT64_MAX)) return z.convert_to<std::int64_t>();
  return z.str();
}

inline json integers_json(std::span<const Integer> v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(integer_json(z));
  return a;
}

inline json candidate_json(const IntegerCandidate& c) {
  return json{{"p", integers_json(c.p)}, {"q", integers_json(c.q)}};
}

inline void put_scalar(json& j, const std::string& key, const Scalar& x) {
  j[key] = x.to_double();
  if (x.is_exact()) j[key + "_exact"] = x.str();
}

inline json classification_json(const Classification& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["N"] = nullptr;
  j["Q"] = nullptr;
  j["exact"] = true;
  j["note"] = c.note;
  switch (c.kind) {
    case ClassificationKind::Rational:
      j["witness"] = candidate_json(*c.rational_witness);
      j["value"] = nullptr;
      break;
    case ClassificationKind::KroneckerInfinite:
      j["witness"] = json{{"u", integers_json(*c.kronecker_u)}};
      j["value"] = nullptr;
      j["infinite"] = true;
      put_scalar(j, "epsilon", Scalar(*c.epsilon));
      break;
    case ClassificationKind::NeedsNumeric:
      j["witness"] = nullptr;
      j["value"] = nullptr;
      break;
  }
  return j;
}

inline json truncated_json(const TruncatedConstant& c) {
  json j;
  j["kind"] = "c_trunc";
  j["witness"] = candidate_json(c.witness);
  put_scalar(j, "value", c.value);
  j["N"] = c.N;
  j["Q"] = c.Q;
  j["exact"] = c.exact;
  return j;
}

inline json flow_criterion_json(const FlowCriterion& c, const char* kind) {
  json j;
  j["kind"] = kind;
  j["witness"] = candidate_json(c.witness);
  put_scalar(j, "value", c.value);
  j["N"] = nullptr;
  j["Q"] = c.Q;
  j["exact"] = c.exact && c.value.is_exact();
  if (c.detail.t_star_infinite) {
    j["t_star"] = nullptr;
    j["t_star_infinite"] = true;
  } else {
    j["t_star"] = c.detail.t_star;
    j["t_star_infinite"] = false;
  }
  return j;
}

inline json tree_bound_json(const TreeBound& b) {
  json ratios = json::array();
  for (double r : b.ratios) {
    if (std::isnan(r)) ratios.push_back(nullptr);
    else ratios.push_back(r);
  }
  return json{{"kind", "tree_bound"}, {"value", b.bound}, {"ratios", ratios}, {"diameter_warning", b.diameter_warning}};
}

inline json tessellation_json(const TessellationCounts& c, double t) {
  json j;
  j["kind"] = "tessellation";
  j["t"] = t;
  j["interior"] = integer_json(c.interior);
  j["boundary"] = integer_json(c.boundary);
  put_scalar(j, "volume_ratio", c.volume_ratio);
  j["boundary_fraction"] = c.boundary.convert_to<double>() / c.volume_ratio.to_double();
  j["cell_side"] = c.cell_side;
  j["exact"] = c.exact;
  return j;
}

inline json box_dimension_json(const BoxDimension& d) {
  json counts = json::array();
  for (const auto& [r, n] : d.counts) counts.push_back(json::array({r, n}));
  return json{{"slope", d.slope}, {"counts", counts}, {"degenerate", d.degenerate}};
}

inline std::string join_integers(std::span<const Integer> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + v[i].str();
  return s;
}

/// CSV: t,lambda1,affine_min,witness_p,witness_q (vector entries joined by ';').
inline void write_orbit_csv(std::ostream& os, const OrbitDiagnostics& d) {
  os << "t,lambda1,affine_min,witness_p,witness_q\n";
  for (std::size_t i = 0; i < d.times.size(); ++i) {
    os << format_double(d.times[i]) << ',' << format_double(d.lambda1[i]) << ',' << format_double(d.affine_min[i])
       << ',' << join_integers(d.affine_witness[i].p) << ',' << join_integers(d.affine_witness[i].q) << '\n';
  }
}

}  // namespace balab::io
