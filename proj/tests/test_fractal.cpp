#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "balab/balab.hpp"

using namespace balab;

namespace {

const double kCantorDim = std::log(2.0) / std::log(3.0);

bool in_cantor(std::size_t i, int depth) {
  for (int d = 0; d < depth; ++d, i /= 3)
    if (i % 3 == 1) return false;
  return true;
}

// Independent per-axis count: integers g with [g - 1/2, g + 1/2] inside
// (-h, h), or meeting [-h, h], found by scanning.
std::pair<long, long> scan_axis(double h) {
  long inside = 0, meet = 0;
  const long reach = static_cast<long>(h) + 2;
  for (long g = -reach; g <= reach; ++g) {
    if (g - 0.5 >= -h && g + 0.5 <= h) ++inside;
    if (g + 0.5 > -h && g - 0.5 < h) ++meet;
  }
  return {inside, meet};
}

}  // namespace

TEST(TreeBound, Examples) {
  const auto cantor = tree_dim_lower_bound(TreeLevelData::geometric(1, 2.0 / 3.0, 1.0 / 3.0, 20));
  EXPECT_NEAR(cantor.bound, kCantorDim, 1e-12);
  EXPECT_EQ(cantor.ratios.size(), 20u);
  EXPECT_FALSE(cantor.diameter_warning);
  EXPECT_EQ(tree_dim_lower_bound(TreeLevelData::geometric(3, 1.0, 0.5, 8)).bound, 3.0);
  EXPECT_NEAR(tree_dim_lower_bound(TreeLevelData::geometric(2, 0.25, 0.5, 12)).bound, 0.0, 1e-12);
}

TEST(TreeBound, NeverExceedsAmbientDimension) {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> delta(0.05, 1.0), shrink(0.1, 0.9);
  for (int trial = 0; trial < 200; ++trial) {
    TreeLevelData d{1 + static_cast<std::size_t>(trial % 3), {}, {}};
    double diam = 1;
    const bool all_one = trial % 5 == 0;
    for (int j = 0; j < 10; ++j) {
      d.deltas.push_back(all_one ? 1.0 : delta(rng));
      diam *= shrink(rng);
      d.diams.push_back(diam);
    }
    const auto b = tree_dim_lower_bound(d);
    EXPECT_LE(b.bound, static_cast<double>(d.k));
    EXPECT_EQ(b.bound == static_cast<double>(d.k), all_one);
  }
}

TEST(TreeBound, ValidationAndWarnings) {
  EXPECT_THROW(tree_dim_lower_bound({1, {0.5, 0.5}, {0.5, 1.5}}), ParameterError);
  EXPECT_THROW(tree_dim_lower_bound({1, {0.0}, {0.5}}), ParameterError);
  EXPECT_THROW(tree_dim_lower_bound({1, {1.5}, {0.5}}), ParameterError);
  EXPECT_THROW(tree_dim_lower_bound({1, {0.5}, {0.5, 0.25}}), ParameterError);
  EXPECT_THROW(tree_dim_lower_bound({1, {}, {}}), ParameterError);
  const auto early = tree_dim_lower_bound({1, {0.5, 0.5, 0.5}, {2.0, 0.5, 0.25}});
  EXPECT_TRUE(std::isnan(early.ratios[0]));
  EXPECT_FALSE(early.diameter_warning);
  const auto bumpy = tree_dim_lower_bound({1, {0.5, 0.5, 0.5}, {0.25, 0.5, 0.125}});
  EXPECT_TRUE(bumpy.diameter_warning);
}

TEST(ConstructionBound, Examples) {
  EXPECT_EQ(construction_bound(3, 1.0, 1.0, 5.0), 3.0);
  EXPECT_NEAR(construction_bound(1, 0.5, 1.0, std::log(4.0) + std::log(2.0)), 0.0, 1e-12);
  EXPECT_NEAR(construction_bound(2, 0.9, 1.0, 10.0), 2 - std::log(10.0 / 9.0) / (10 - std::log(4.0)), 1e-15);
  EXPECT_NEAR(construction_bound(2, 0.9, 1.0, 10.0), 1.98777, 1e-5);
  EXPECT_THROW(construction_bound(1, 0.5, 1.0, std::log(4.0)), ParameterError);
  EXPECT_THROW(construction_bound(1, 0.0, 1.0, 5.0), ParameterError);
  EXPECT_THROW(construction_bound(1, 0.5, -1.0, 5.0), ParameterError);
}

TEST(Tessellation, IdentityMap) {
  for (std::size_t m = 1; m <= 2; ++m)
    for (std::size_t n = 1; n <= 2; ++n) {
      const auto c = tessellation_counts(FlowSpec(m, n), 0.5, 0.0);
      EXPECT_EQ(c.interior, 1);
      EXPECT_GE(c.interior + c.boundary, 1);
      EXPECT_EQ(c.volume_ratio.to_double(), 1.0);
    }
}

TEST(Tessellation, ExactCountsForOneByOne) {
  const FlowSpec fs(1, 1);
  struct Row {
    int growth;
    long interior, meet;
  };
  for (const auto& row : {Row{10, 891, 1111}, Row{30, 26071, 27931}, Row{100, 989901, 1010101}}) {
    const auto c = tessellation_counts_exact(fs, 1.0, Rational(row.growth));
    EXPECT_TRUE(c.exact);
    EXPECT_EQ(c.interior, row.interior);
    EXPECT_EQ(c.interior + c.boundary, row.meet);
    const Rational vol = c.volume_ratio.rational();
    EXPECT_EQ(vol, Rational(row.growth) * row.growth * row.growth);
    EXPECT_LE(Rational(c.interior), vol);
    EXPECT_LE(vol, Rational(c.interior + c.boundary));
  }
  const auto big = tessellation_counts_exact(fs, 1.0, Rational(100));
  EXPECT_LE(Rational(big.boundary) / big.volume_ratio.rational(), Rational(5, 100));
}

TEST(Tessellation, AxisCountsMatchScan) {
  for (int tenths = 0; tenths <= 400; ++tenths) {
    const double sigma = 0.1 * tenths + 0.05;
    const auto c = detail::axis_count(Scalar(sigma));
    const auto [inside, meet] = scan_axis(sigma / 2);
    EXPECT_EQ(c.interior, inside) << sigma;
    EXPECT_EQ(c.meet, meet) << sigma;
  }
  for (int num = 1; num <= 60; ++num) {
    const Rational sigma(num, 4);
    const auto c = detail::axis_count(Scalar(sigma));
    const auto [inside, meet] = scan_axis(to_double(sigma) / 2);
    EXPECT_EQ(c.interior, inside) << num;
    EXPECT_EQ(c.meet, meet) << num;
  }
}

TEST(Tessellation, SandwichAndTrend) {
  for (std::size_t m = 1; m <= 2; ++m)
    for (std::size_t n = 1; n <= 2; ++n) {
      const FlowSpec fs(m, n);
      double prev = INFINITY;
      for (int growth : {10, 30, 100}) {
        const auto c = tessellation_counts_exact(fs, 0.7, Rational(growth));
        const double vol = c.volume_ratio.to_double();
        EXPECT_LE(c.interior.convert_to<double>(), vol);
        EXPECT_LE(vol, (c.interior + c.boundary).convert_to<double>());
        if (c.volume_ratio.is_exact()) {
          EXPECT_LE(Rational(c.interior), c.volume_ratio.rational());
          EXPECT_LE(c.volume_ratio.rational(), Rational(c.interior + c.boundary));
        }
        const double fraction = c.boundary.convert_to<double>() / vol;
        EXPECT_LE(fraction, prev) << m << "x" << n << " at " << growth;
        prev = fraction;
      }
      // With m = 2 the b-coordinates expand only by e^{t/2} = 10 at t = ln 100,
      // so the boundary layer alone is about 2/10 of the volume.
      if (m == 1) {
        EXPECT_LE(prev, 0.1) << m << "x" << n;
      } else {
        EXPECT_GT(prev, 0.2) << m << "x" << n;
      }
    }
}

TEST(Tessellation, FloatAndExactAgree) {
  for (std::size_t m = 1; m <= 2; ++m)
    for (std::size_t n = 1; n <= 2; ++n) {
      const auto e = tessellation_counts_exact(FlowSpec(m, n), 1.0, Rational(73, 10));
      const auto f = tessellation_counts(FlowSpec(m, n), 1.0, std::log(7.3));
      EXPECT_EQ(e.interior, f.interior);
      EXPECT_EQ(e.boundary, f.boundary);
      EXPECT_NEAR(e.volume_ratio.to_double(), f.volume_ratio.to_double(), 1e-9 * f.volume_ratio.to_double());
    }
}

// Random points of Phi_t(V_r) land in exactly one listed translate, and
// interior translates lie inside.
TEST(Tessellation, TranslatesPartitionTheImage) {
  std::mt19937_64 rng(107);
  for (std::size_t m = 1; m <= 2; ++m)
    for (std::size_t n = 1; n <= 2; ++n) {
      const FlowSpec fs(m, n);
      const auto counts = tessellation_counts(fs, 1.0, 1.3);
      const auto tr = tessellation_translates(counts);
      EXPECT_EQ(Integer(tr.interior.size()), counts.interior);
      EXPECT_EQ(Integer(tr.boundary.size()), counts.boundary);
      std::set<IntPoint> all;
      for (const auto& g : tr.interior) all.insert(g);
      for (const auto& g : tr.boundary) all.insert(g);
      EXPECT_EQ(all.size(), tr.interior.size() + tr.boundary.size());
      for (const auto& g : tr.interior)
        for (std::size_t i = 0; i < g.size(); ++i)
          EXPECT_LE(std::fabs(static_cast<double>(g[i])) + 0.5, tr.half_width[i]);
      for (int sample = 0; sample < 2000; ++sample) {
        IntPoint cell(tr.half_width.size());
        for (std::size_t i = 0; i < cell.size(); ++i) {
          std::uniform_real_distribution<double> coord(-tr.half_width[i], tr.half_width[i]);
          cell[i] = static_cast<std::int64_t>(std::floor(coord(rng) + 0.5));
        }
        EXPECT_EQ(all.count(cell), 1u);
      }
    }
  EXPECT_THROW(tessellation_translates(tessellation_counts(FlowSpec(1, 1), 1.0, 10.0), 1000), BudgetError);
  EXPECT_THROW(tessellation_counts(FlowSpec(1, 1), 0.0, 1.0), ParameterError);
  EXPECT_THROW(tessellation_counts(FlowSpec(1, 1), 0.5, -1.0), ParameterError);
}

TEST(BoxDim, FullBoxAndSingleCell) {
  GridIndicator full(64, {Interval{0, 1}, Interval{0, 1}});
  for (std::size_t i = 0; i < full.size(); ++i) full.set(i);
  const std::vector<std::size_t> sizes{1, 2, 4, 8, 16};
  EXPECT_NEAR(box_dim_estimate(full, sizes).slope, 2.0, 1e-12);
  GridIndicator one(64, {Interval{0, 1}, Interval{0, 1}});
  one.set(100);
  const auto d = box_dim_estimate(one, sizes);
  EXPECT_NEAR(d.slope, 0.0, 1e-12);
  for (const auto& [r, count] : d.counts) EXPECT_EQ(count, 1u);
  GridIndicator empty(64, {Interval{0, 1}});
  const auto e = box_dim_estimate(empty, sizes);
  EXPECT_TRUE(e.degenerate);
  EXPECT_EQ(e.slope, 0.0);
  EXPECT_THROW(box_dim_estimate(full, std::vector<std::size_t>{1, 3, 4}), ParameterError);
  EXPECT_THROW(box_dim_estimate(full, std::vector<std::size_t>{1, 2}), ParameterError);
}

TEST(BoxDim, CantorSetAndProduct) {
  constexpr int kDepth = 7;
  const std::size_t res = 2187;
  GridIndicator cantor(res, {Interval{0, 1}});
  for (std::size_t i = 0; i < res; ++i) cantor.set(i, in_cantor(i, kDepth));
  const std::vector<std::size_t> sizes{243, 81, 27, 9, 3};  // r = 3^-2 .. 3^-6
  const auto d = box_dim_estimate(cantor, sizes);
  EXPECT_NEAR(d.slope, kCantorDim, 1e-12);
  GridIndicator product(res, {Interval{0, 1}, Interval{0, 1}});
  for (std::size_t row = 0; row < res; ++row)
    if (in_cantor(row, kDepth))
      for (std::size_t col = 0; col < res; ++col) product.set(row * res + col);
  EXPECT_NEAR(box_dim_estimate(product, sizes).slope, 1 + kCantorDim, 0.07);
}

TEST(GridIndicator, PgmRoundTripAndCsv) {
  GridIndicator g(4, {Interval{0, 1}, Interval{-1, 1}});
  g.set(1);
  g.set(14);
  std::stringstream pgm;
  g.write_pgm(pgm);
  EXPECT_EQ(pgm.str().substr(0, 11), "P5\n4 4\n255\n");
  const auto back = GridIndicator::read_pgm(pgm, {Interval{0, 1}, Interval{-1, 1}});
  EXPECT_EQ(back, g);
  std::ostringstream csv;
  g.write_csv(csv);
  EXPECT_EQ(csv.str(), "x0,x1\n0.375,-0.75\n0.625,0.75\n");
  std::istringstream bad("P2\n1 1\n255\n");
  EXPECT_THROW(GridIndicator::read_pgm(bad), ParameterError);
  EXPECT_THROW(GridIndicator(0, {Interval{0, 1}}), ParameterError);
  EXPECT_THROW(GridIndicator(4, {Interval{1, 1}}), ParameterError);
}

TEST(SliceScan, Examples) {
  const auto all = ba_slice_scan(0.0, 8, 20, {0, 1}, {0, 1});
  EXPECT_EQ(all.at_q.count(), 64u);
  const auto none = ba_slice_scan(1.0, 8, 20, {0, 1}, {0, 1});
  EXPECT_EQ(none.at_q.count(), 0u);
  const auto centre = ba_slice_scan(0.4, 1, 100, {-0.05, 0.05}, {0.45, 0.55});
  EXPECT_EQ(centre.at_q.center(0), (std::vector<double>{0.0, 0.5}));
  EXPECT_TRUE(centre.at_q.marked(0));
  EXPECT_THROW(ba_slice_scan(-0.1, 8, 20, {0, 1}, {0, 1}), ParameterError);
}

TEST(SliceScan, Monotonicity) {
  ScanOptions opt;
  opt.threads = 3;
  const auto lo = ba_slice_scan(0.05, 24, 30, {0, 1}, {0, 1}, opt);
  const auto hi = ba_slice_scan(0.15, 24, 30, {0, 1}, {0, 1}, opt);
  const auto deeper = ba_slice_scan(0.05, 24, 60, {0, 1}, {0, 1}, opt);
  for (std::size_t i = 0; i < lo.at_q.size(); ++i) {
    if (hi.at_q.marked(i)) {
      EXPECT_TRUE(lo.at_q.marked(i));
    }
    if (lo.at_2q.marked(i)) {
      EXPECT_TRUE(lo.at_q.marked(i));
    }
    EXPECT_EQ(lo.at_2q.marked(i), deeper.at_q.marked(i));
  }
  EXPECT_GT(lo.at_q.count(), hi.at_q.count());
  const auto serial = ba_slice_scan(0.05, 24, 30, {0, 1}, {0, 1});
  EXPECT_EQ(serial.at_q, lo.at_q);
}
