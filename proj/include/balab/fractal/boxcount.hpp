#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "balab/dynamics/criteria.hpp"

namespace balab {

struct Interval {
  double lo = 0;
  double hi = 1;
};

/// Occupancy bitmap over a box in R^d, resolution cells per axis. Cell
/// (i_0, ..., i_{d-1}) has flat index sum i_k R^k, so in 2-D the first axis
/// runs along rows.
class GridIndicator {
 public:
  GridIndicator(std::size_t resolution, std::vector<Interval> bounds)
      : resolution_(resolution), bounds_(std::move(bounds)) {
    if (resolution_ == 0) throw ParameterError("grid resolution must be positive");
    if (bounds_.empty()) throw ParameterError("grid needs at least one axis");
    for (const auto& b : bounds_)
      if (!(b.hi > b.lo)) throw ParameterError("grid box is degenerate");
    std::size_t cells = 1;
    for (std::size_t k = 0; k < bounds_.size(); ++k) cells *= resolution_;
    cells_.assign(cells, 0);
  }

  std::size_t dim() const noexcept { return bounds_.size(); }
  std::size_t resolution() const noexcept { return resolution_; }
  const std::vector<Interval>& bounds() const noexcept { return bounds_; }
  std::size_t size() const noexcept { return cells_.size(); }

  bool marked(std::size_t flat) const { return cells_[flat] != 0; }
  void set(std::size_t flat, bool on = true) { cells_[flat] = on ? 1 : 0; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto v : cells_) c += v;
    return c;
  }

  std::vector<std::size_t> index(std::size_t flat) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t k = 0; k < dim(); ++k) {
      idx[k] = flat % resolution_;
      flat /= resolution_;
    }
    return idx;
  }

  std::vector<double> center(std::size_t flat) const {
    const auto idx = index(flat);
    std::vector<double> c(dim());
    for (std::size_t k = 0; k < dim(); ++k) {
      const double w = (bounds_[k].hi - bounds_[k].lo) / static_cast<double>(resolution_);
      c[k] = bounds_[k].lo + (static_cast<double>(idx[k]) + 0.5) * w;
    }
    return c;
  }

  /// Binary PGM (P5), one byte per cell, 255 = marked. 1-D grids are one row.
  void write_pgm(std::ostream& os) const {
    if (dim() > 2) throw ParameterError("PGM output needs a 1-D or 2-D grid");
    const std::size_t width = resolution_, height = dim() == 2 ? resolution_ : 1;
    os << "P5\n" << width << ' ' << height << "\n255\n";
    for (auto v : cells_) os.put(static_cast<char>(v ? 255 : 0));
  }

  static GridIndicator read_pgm(std::istream& is, std::vector<Interval> bounds = {}) {
    std::string magic;
    is >> magic;
    if (magic != "P5") throw ParameterError("not a binary PGM (P5) file");
    auto next_number = [&] {
      is >> std::ws;
      while (is.peek() == '#') {
        std::string skip;
        std::getline(is, skip);
        is >> std::ws;
      }
      std::size_t v = 0;
      if (!(is >> v)) throw ParameterError("malformed PGM header");
      return v;
    };
    const std::size_t width = next_number(), height = next_number(), maxval = next_number();
    if (maxval == 0 || maxval > 255) throw ParameterError("PGM maxval must be 1..255");
    is.get();
    if (height != 1 && height != width) throw ParameterError("PGM grid must be square or a single row");
    const std::size_t d = height == 1 ? 1 : 2;
    if (bounds.empty()) bounds.assign(d, Interval{0, 1});
    if (bounds.size() != d) throw ParameterError("PGM bounds do not match its dimension");
    GridIndicator g(width, std::move(bounds));
    for (std::size_t i = 0; i < g.size(); ++i) {
      const int c = is.get();
      if (c == EOF) throw ParameterError("PGM pixel data is truncated");
      g.cells_[i] = c != 0 ? 1 : 0;
    }
    return g;
  }

  /// CSV of marked cell centres, one column per axis (x0, x1, ...).
  void write_csv(std::ostream& os) const {
    for (std::size_t k = 0; k < dim(); ++k) os << (k ? ",x" : "x") << k;
    os << '\n';
    for (std::size_t i = 0; i < size(); ++i) {
      if (!marked(i)) continue;
      const auto c = center(i);
      for (std::size_t k = 0; k < dim(); ++k) os << (k ? "," : "") << format_double(c[k]);
      os << '\n';
    }
  }

  friend bool operator==(const GridIndicator& a, const GridIndicator& b) {
    return a.resolution_ == b.resolution_ && a.cells_ == b.cells_ && a.bounds_.size() == b.bounds_.size();
  }

 private:
  std::size_t resolution_;
  std::vector<Interval> bounds_;
  std::vector<std::uint8_t> cells_;
};

struct BoxDimension {
  double slope = 0;
  std::vector<std::pair<double, std::uint64_t>> counts;  // (relative box size r, N(r))
  bool degenerate = false;  // empty bitmap
};

/// Least-squares slope of log N(r) against log(1/r). Box sizes are given in
/// grid cells and must divide the resolution; r = size / resolution.
inline BoxDimension box_dim_estimate(const GridIndicator& g, std::span<const std::size_t> box_sizes) {
  if (box_sizes.size() < 3) throw ParameterError("box counting needs at least 3 scales");
  for (std::size_t i = 0; i < box_sizes.size(); ++i) {
    const auto s = box_sizes[i];
    if (s == 0 || g.resolution() % s != 0)
      throw ParameterError("box size " + std::to_string(s) + " does not divide resolution " +
                           std::to_string(g.resolution()));
    for (std::size_t j = 0; j < i; ++j)
      if (box_sizes[j] == s) throw ParameterError("box sizes must be distinct");
  }
  BoxDimension out;
  if (g.count() == 0) {
    out.degenerate = true;
    for (auto s : box_sizes) out.counts.emplace_back(static_cast<double>(s) / static_cast<double>(g.resolution()), 0);
    return out;
  }
  std::vector<double> xs, ys;
  for (auto s : box_sizes) {
    const std::size_t per_axis = g.resolution() / s;
    std::size_t boxes = 1;
    for (std::size_t k = 0; k < g.dim(); ++k) boxes *= per_axis;
    std::vector<std::uint8_t> hit(boxes, 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g.marked(i)) continue;
      std::size_t flat = i, box = 0, stride = 1;
      for (std::size_t k = 0; k < g.dim(); ++k) {
        box += (flat % g.resolution()) / s * stride;
        flat /= g.resolution();
        stride *= per_axis;
      }
      hit[box] = 1;
    }
    std::uint64_t n = 0;
    for (auto h : hit) n += h;
    const double r = static_cast<double>(s) / static_cast<double>(g.resolution());
    out.counts.emplace_back(r, n);
    xs.push_back(-std::log(r));
    ys.push_back(std::log(static_cast<double>(n)));
  }
  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sx += xs[i], sy += ys[i];
  const double mx = sx / k, my = sy / k;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  out.slope = sxy / sxx;
  return out;
}

/// Marked cells for the bracketing pair: eps(Q) >= c and eps(2Q) >= c.
/// The second is a subset of the first since eps is nonincreasing in Q.
struct SliceScan {
  GridIndicator at_q;
  GridIndicator at_2q;
  double threshold = 0;
  std::uint64_t Q = 0;
};

/// Scans cell centres (a, b) of `region` (m = n = 1) and marks those whose
/// affine flow criterion over |q| <= Q stays >= c.
inline SliceScan ba_slice_scan(double c, std::size_t resolution, std::uint64_t Q, Interval a_range, Interval b_range,
                               const ScanOptions& opt = {}) {
  if (!(c >= 0) || !std::isfinite(c)) throw ParameterError("slice scan: threshold c must be >= 0");
  if (Q < 1) throw ParameterError("slice scan: Q must be >= 1");
  SliceScan out{GridIndicator(resolution, {a_range, b_range}), GridIndicator(resolution, {a_range, b_range}), c, Q};
  const FlowSpec fs(1, 1);
  ScanOptions per_cell = opt;
  per_cell.threads = 1;
  run_parallel(resolution, opt.threads, [&](std::size_t row) {
    for (std::size_t col = 0; col < resolution; ++col) {
      const std::size_t flat = row * resolution + col;
      const auto centre = out.at_q.center(flat);
      const AffineSystem sys(1, 1, {Scalar(centre[0])}, {Scalar(centre[1])});
      if (epsilon_inf(fs, sys, Q, per_cell).value.to_double() < c) continue;
      out.at_q.set(flat);
      if (epsilon_inf(fs, sys, 2 * Q, per_cell).value.to_double() >= c) out.at_2q.set(flat);
    }
  });
  return out;
}

}  // namespace balab
