#include <gtest/gtest.h>

#include <random>
#include <set>

#include "balab/balab.hpp"
#include "oracles.hpp"

using namespace balab;

namespace {

AffineSystem one_by_one(Scalar a, Scalar b) { return AffineSystem(1, 1, {std::move(a)}, {std::move(b)}); }

const double kPhi = 1.6180339887498949;

AffineSystem random_exact_system(std::mt19937_64& rng, std::size_t m, std::size_t n, int num = 12, int den = 7) {
  std::vector<Scalar> a;
  Vector b;
  for (std::size_t i = 0; i < m * n; ++i) a.emplace_back(oracle::random_rational(rng, num, den));
  for (std::size_t i = 0; i < m; ++i) b.emplace_back(oracle::random_rational(rng, num, den));
  return AffineSystem(m, n, std::move(a), std::move(b));
}

// max_i dist((Aq + b)_i, Z)^m * |q|^n, straight from the definition.
Rational brute_product(const AffineSystem& sys, const std::vector<std::int64_t>& q) {
  Rational alpha = 0;
  std::int64_t qn = 0;
  for (auto v : q) qn = std::max<std::int64_t>(qn, v < 0 ? -v : v);
  for (std::size_t i = 0; i < sys.m(); ++i) {
    Rational x = sys.b()[i].rational();
    for (std::size_t j = 0; j < sys.n(); ++j) x += sys.a()(i, j).rational() * q[j];
    alpha = std::max(alpha, oracle::dist_z(x));
  }
  return pow_exact(alpha, static_cast<unsigned>(sys.m())) * pow_exact(Rational(qn), static_cast<unsigned>(sys.n()));
}

template <typename F>
void for_each_in_box(std::size_t n, std::int64_t reach, F&& f) {
  std::vector<std::int64_t> q(n, -reach);
  while (true) {
    f(q);
    std::size_t i = 0;
    while (i < n && q[i] == reach) q[i] = -reach, ++i;
    if (i == n) return;
    ++q[i];
  }
}

}  // namespace

TEST(ProductStatistic, Examples) {
  const auto s1 = product_statistic(one_by_one(0, Rational(1, 2)), IntVector{4});
  EXPECT_EQ(s1.value, Scalar(2));
  EXPECT_TRUE(s1.value.is_exact());
  const auto s2 = product_statistic(one_by_one(Rational(1, 3), 0), IntVector{3});
  EXPECT_EQ(s2.value, Scalar(0));
  EXPECT_EQ(s2.witness.p, IntVector{-1});
  const auto s3 = product_statistic(one_by_one(kPhi, 0), IntVector{3});
  EXPECT_FALSE(s3.value.is_exact());
  EXPECT_NEAR(s3.value.to_double(), 3 * std::fabs(3 * kPhi - 5), 1e-12);
  EXPECT_NEAR(s3.value.to_double(), 0.437694, 1e-6);
  EXPECT_THROW(product_statistic(one_by_one(0, 0), IntVector{1, 2}), DimensionError);
}

TEST(CTrunc, Examples) {
  const auto half = one_by_one(0, Rational(1, 2));
  auto c = c_trunc(half, 1, 100);
  EXPECT_EQ(c.value, Scalar(Rational(1, 2)));
  EXPECT_EQ(c.witness.q, IntVector{1});
  c = c_trunc(half, 10, 100);
  EXPECT_EQ(c.value, Scalar(5));
  EXPECT_EQ(boost::multiprecision::abs(c.witness.q[0]), Integer(10));
  c = c_trunc(one_by_one(Rational(1, 3), 0), 1, 10);
  EXPECT_EQ(c.value, Scalar(0));
  EXPECT_EQ(c.witness.q, IntVector{3});
  EXPECT_THROW(c_trunc(half, 5, 4), ParameterError);
  EXPECT_THROW(c_trunc(half, 0, 4), ParameterError);
}

TEST(CTrunc, MatchesBruteForceOnRandomSystems) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 1 + trial % 2, n = 1 + (trial / 2) % 2;
    const auto sys = random_exact_system(rng, m, n);
    const std::uint64_t N = 1 + trial % 3, Q = N + 4;
    Rational best = -1;
    for_each_in_box(n, static_cast<std::int64_t>(Q), [&](const std::vector<std::int64_t>& q) {
      std::int64_t s = 0;
      for (auto v : q) s = std::max<std::int64_t>(s, v < 0 ? -v : v);
      if (s < static_cast<std::int64_t>(N)) return;
      const Rational v = brute_product(sys, q);
      if (best < 0 || v < best) best = v;
    });
    const auto got = c_trunc(sys, N, Q);
    ASSERT_TRUE(got.exact);
    EXPECT_EQ(got.value.rational(), best) << "trial " << trial;
    // the witness reproduces the value
    EXPECT_EQ(product_statistic(sys, got.witness.q).value, got.value);
    // float path agrees numerically
    Matrix<Scalar> af(m, n);
    Vector bf;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) af(i, j) = Scalar(sys.a()(i, j).to_double());
      bf.emplace_back(sys.b()[i].to_double());
    }
    const auto fl = c_trunc(AffineSystem(af, bf), N, Q);
    EXPECT_FALSE(fl.exact);
    EXPECT_NEAR(fl.value.to_double(), to_double(best), 1e-9 * std::max(1.0, to_double(best)));
  }
}

TEST(CTrunc, Monotonicity) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sys = random_exact_system(rng, 1 + trial % 2, 1 + trial % 2, 30, 13);
    Scalar prev;
    for (std::uint64_t Q = 3; Q <= 12; Q += 3) {
      const auto c = c_trunc(sys, 2, Q).value;
      if (Q > 3) {
        EXPECT_LE(c, prev);
      }
      prev = c;
    }
    for (std::uint64_t N = 1; N < 6; ++N) EXPECT_LE(c_trunc(sys, N, 8).value, c_trunc(sys, N + 1, 8).value);
  }
}

TEST(CTrunc, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto sys = random_exact_system(rng, 2, 2, 50, 17);
    ScanOptions one, many;
    many.threads = 4;
    const auto a = c_trunc(sys, 1, 9, one), b = c_trunc(sys, 1, 9, many);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.witness.p, b.witness.p);
    EXPECT_EQ(a.witness.q, b.witness.q);
  }
  const auto fsys = one_by_one(kPhi, 0.25);
  ScanOptions many;
  many.threads = 3;
  EXPECT_EQ(c_trunc(fsys, 1, 5000).witness.q, c_trunc(fsys, 1, 5000, many).witness.q);
}

TEST(CTrunc, BudgetIsEnforced) {
  ScanOptions opt;
  opt.budget = 100;
  EXPECT_THROW(c_trunc(one_by_one(kPhi, 0), 1, 1000, opt), BudgetError);
  opt.budget = 2000;
  EXPECT_NO_THROW(c_trunc(one_by_one(kPhi, 0), 1, 1000, opt));
}

TEST(CTrunc, GoldenRatioAgainstContinuedFractions) {
  const auto sys = one_by_one(kPhi, 0);
  for (std::uint64_t N : {1, 3, 10, 50}) {
    const auto c = c_trunc(sys, N, 5000);
    EXPECT_NEAR(c.value.to_double(), oracle::golden_min(N, 5000), 1e-9) << N;
  }
}

// A double input is an exact dyadic rational; its convergents give the
// homogeneous minimum independently of the shell enumeration.
TEST(CTrunc, RandomDoublesAgainstConvergents) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double a = unit(rng);
    const std::uint64_t N = 1 + trial % 7;
    const double want = oracle::convergent_min(Rational(a), N, 20000).convert_to<double>();
    const double got = c_trunc(one_by_one(a, 0.0), N, 20000).value.to_double();
    if (want < 0.5) {
      EXPECT_NEAR(got, want, 1e-9 * std::max(1.0, want)) << "a = " << a;
    } else {
      EXPECT_GE(got, 0.5 - 1e-9) << "a = " << a;
    }
  }
}

TEST(Rationality, Examples) {
  const auto w = rationality_witness(one_by_one(Rational(1, 2), Rational(1, 2)));
  ASSERT_TRUE(w.has_value());
  for (const auto& r : one_by_one(Rational(1, 2), Rational(1, 2)).residual(w->p, w->q)) EXPECT_TRUE(r.is_zero());
  EXPECT_FALSE(rationality_witness(one_by_one(0, Rational(1, 2))).has_value());
  const AffineSystem integral(2, 1, {Scalar(Rational(3, 7)), Scalar(2)}, {Scalar(4), Scalar(-1)});
  const auto wi = rationality_witness(integral);
  ASSERT_TRUE(wi.has_value());
  EXPECT_EQ(wi->q, IntVector{0});
  EXPECT_EQ(wi->p, (IntVector{-4, 1}));
  EXPECT_THROW(rationality_witness(one_by_one(0.5, 0.5)), ExactnessError);
}

TEST(Rationality, AgreesWithBoxSearch) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + trial % 2, n = 1 + (trial / 2) % 2;
    const auto sys = random_exact_system(rng, m, n, 6, 4);
    const auto w = rationality_witness(sys);
    if (w) {
      for (const auto& r : sys.residual(w->p, w->q)) EXPECT_TRUE(r.is_zero());
      continue;
    }
    // A q + b integral for some q means rational; with denominators <= 4 a
    // solution, if any, exists with |q| <= lcm(1..4) = 12.
    bool found = false;
    for_each_in_box(n, 12, [&](const std::vector<std::int64_t>& q) {
      if (found) return;
      bool integral = true;
      for (std::size_t i = 0; i < m; ++i) {
        Rational x = sys.b()[i].rational();
        for (std::size_t j = 0; j < n; ++j) x += sys.a()(i, j).rational() * q[j];
        integral = integral && boost::multiprecision::denominator(x) == 1;
      }
      found = integral;
    });
    EXPECT_FALSE(found) << "trial " << trial;
  }
}

TEST(Kronecker, Examples) {
  auto u = kronecker_witness(one_by_one(Rational(1, 2), Rational(1, 4)));
  ASSERT_TRUE(u.has_value());
  EXPECT_EQ(*u, IntVector{2});
  EXPECT_FALSE(kronecker_witness(one_by_one(Rational(1, 2), Rational(1, 2))).has_value());
  EXPECT_FALSE(oracle::exhaustive_kronecker(Rational(1, 2), Rational(1, 2), 10));
  EXPECT_FALSE(kronecker_witness(one_by_one(Rational(5, 7), 0)).has_value());
  const AffineSystem wide(2, 2, {Scalar(Rational(1, 3)), Scalar(0), Scalar(1), Scalar(Rational(2, 5))},
                          {Scalar(0), Scalar(0)});
  EXPECT_FALSE(kronecker_witness(wide).has_value());
  EXPECT_THROW(kronecker_witness(one_by_one(0.5, 0.25)), ExactnessError);
}

TEST(Kronecker, AgreesWithExhaustiveSearchInTwoForms) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sys = random_exact_system(rng, 2, 1, 5, 4);
    bool exhaustive = false;
    for_each_in_box(2, 24, [&](const std::vector<std::int64_t>& u) {
      if (exhaustive || (u[0] == 0 && u[1] == 0)) return;
      const Rational atu = sys.a()(0, 0).rational() * u[0] + sys.a()(1, 0).rational() * u[1];
      const Rational btu = sys.b()[0].rational() * u[0] + sys.b()[1].rational() * u[1];
      exhaustive = boost::multiprecision::denominator(atu) == 1 && boost::multiprecision::denominator(btu) != 1;
    });
    const auto u = kronecker_witness(sys);
    EXPECT_EQ(u.has_value(), exhaustive) << "trial " << trial;
    if (u) {
      const Rational atu = sys.a()(0, 0).rational() * Rational((*u)[0]) + sys.a()(1, 0).rational() * Rational((*u)[1]);
      EXPECT_EQ(boost::multiprecision::denominator(atu), 1);
      EXPECT_NE(boost::multiprecision::denominator(dot(sys.b(), *u)), 1);
    }
  }
}

TEST(Kronecker, EpsilonIsALowerBound) {
  std::mt19937_64 rng(43);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    const std::size_t m = 1 + trial % 2, n = 1 + (trial / 2) % 2;
    const auto sys = random_exact_system(rng, m, n, 6, 6);
    const auto u = kronecker_witness(sys);
    if (!u) continue;
    ++checked;
    const Rational eps = kronecker_epsilon(sys, *u);
    EXPECT_GT(eps, 0);
    for_each_in_box(n, 6, [&](const std::vector<std::int64_t>& q) {
      std::int64_t s = 0;
      for (auto v : q) s = std::max<std::int64_t>(s, v < 0 ? -v : v);
      const Rational lower = pow_exact(eps, static_cast<unsigned>(m)) * pow_exact(Rational(s), static_cast<unsigned>(n));
      EXPECT_GE(brute_product(sys, q), lower);
    });
    for (std::uint64_t N : {1, 3}) {
      const Rational lower = pow_exact(eps, static_cast<unsigned>(m)) * pow_exact(Rational(N), static_cast<unsigned>(n));
      EXPECT_GE(c_trunc(sys, N, 6).value.rational(), lower);
    }
  }
  EXPECT_GE(checked, 20);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(one_by_one(Rational(1, 2), Rational(1, 2))).kind, ClassificationKind::Rational);
  const auto k = classify(one_by_one(Rational(1, 2), Rational(1, 4)));
  EXPECT_EQ(k.kind, ClassificationKind::KroneckerInfinite);
  EXPECT_EQ(*k.kronecker_u, IntVector{2});
  const auto h = classify(one_by_one(0, Rational(1, 2)));
  EXPECT_EQ(h.kind, ClassificationKind::KroneckerInfinite);
  EXPECT_EQ(*h.kronecker_u, IntVector{1});
  EXPECT_EQ(*h.epsilon, Rational(1, 2));
  EXPECT_THROW(classify(one_by_one(kPhi, 0)), ExactnessError);
}

TEST(Classify, InconsistentFormsGiveDualObstruction) {
  // q/2 + 1/2 and q/2 need q odd and q even; u = (1, -1) kills A^T u.
  const AffineSystem sys(2, 1, {Scalar(Rational(1, 2)), Scalar(Rational(1, 2))},
                         {Scalar(Rational(1, 2)), Scalar(0)});
  const auto c = classify(sys);
  EXPECT_EQ(c.kind, ClassificationKind::KroneckerInfinite);
}

TEST(Classify, ExclusiveAndWitnessesReverify) {
  std::mt19937_64 rng(47);
  int counts[3] = {0, 0, 0};
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + trial % 2, n = 1 + (trial / 2) % 2;
    const auto sys = random_exact_system(rng, m, n, 5, 6);
    const auto c = classify(sys);
    ++counts[static_cast<int>(c.kind)];
    switch (c.kind) {
      case ClassificationKind::Rational:
        EXPECT_FALSE(c.kronecker_u.has_value());
        for (const auto& r : sys.residual(c.rational_witness->p, c.rational_witness->q)) EXPECT_TRUE(r.is_zero());
        EXPECT_FALSE(kronecker_witness(sys).has_value());
        break;
      case ClassificationKind::KroneckerInfinite: {
        EXPECT_FALSE(c.rational_witness.has_value());
        EXPECT_FALSE(rationality_witness(sys).has_value());
        const auto& u = *c.kronecker_u;
        for (std::size_t j = 0; j < n; ++j) {
          Rational s = 0;
          for (std::size_t i = 0; i < m; ++i) s += sys.a()(i, j).rational() * Rational(u[i]);
          EXPECT_EQ(boost::multiprecision::denominator(s), 1);
        }
        EXPECT_NE(boost::multiprecision::denominator(dot(sys.b(), u)), 1);
        break;
      }
      case ClassificationKind::NeedsNumeric:
        EXPECT_FALSE(rationality_witness(sys).has_value());
        EXPECT_FALSE(kronecker_witness(sys).has_value());
        break;
    }
  }
  // For exact systems Kronecker's theorem makes irrational equivalent to the
  // dual obstruction, so NeedsNumeric never occurs.
  EXPECT_EQ(counts[2], 0);
  EXPECT_GT(counts[0], 0);
  EXPECT_GT(counts[1], 0);
}

TEST(Classify, RationalReductionIdentity) {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> coord(-15, 15);
  int systems = 0;
  while (systems < 30) {
    const std::size_t m = 1 + systems % 2, n = 1 + (systems / 2) % 2;
    const auto sys = random_exact_system(rng, m, n, 9, 5);
    const auto w = rationality_witness(sys);
    if (!w) continue;
    ++systems;
    for (int k = 0; k < 20; ++k) {
      IntVector q(n);
      for (auto& v : q) v = coord(rng);
      IntVector diff(n);
      for (std::size_t j = 0; j < n; ++j) diff[j] = q[j] - w->q[j];
      if (sup_norm(std::span<const Integer>(diff)) == 0 || sup_norm(std::span<const Integer>(q)) == 0) continue;
      const auto stat = product_statistic(sys, q);
      IntVector pd(m);
      for (std::size_t i = 0; i < m; ++i) pd[i] = stat.witness.p[i] - w->p[i];
      const auto homogeneous = AffineSystem::homogeneous(sys.a());
      const Rational lhs = stat.value.rational() *
                           pow_exact(Rational(sup_norm(std::span<const Integer>(diff)),
                                              sup_norm(std::span<const Integer>(q))),
                                     static_cast<unsigned>(n));
      const Rational rhs = pow_exact(sup_norm(homogeneous.residual(pd, diff)).rational(), static_cast<unsigned>(m)) *
                           pow_exact(Rational(sup_norm(std::span<const Integer>(diff))), static_cast<unsigned>(n));
      EXPECT_EQ(lhs, rhs);
    }
  }
}

TEST(Psi, Examples) {
  const auto half = one_by_one(0, Rational(1, 2));
  const auto w = psi_approx_witnesses(half, PsiFunction::inverse(), 100);
  ASSERT_EQ(w.size(), 4u);
  for (const auto& c : w) EXPECT_LE(boost::multiprecision::abs(c.q[0]), 2);
  const auto third = psi_approx_witnesses(one_by_one(Rational(1, 3), 0), PsiFunction::inverse(), 100);
  std::set<long> qs;
  for (const auto& c : third) qs.insert(c.q[0].convert_to<long>());
  for (long q = -99; q <= 99; q += 3)
    if (q != 0) {
      EXPECT_TRUE(qs.count(q)) << q;
    }
  EXPECT_TRUE(psi_approx_witnesses(half, PsiFunction::inverse(Rational(1, 4)), 100).empty());
}

TEST(Psi, MatchesProductCriterionPointwise) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + trial % 2, n = 1 + (trial / 2) % 2;
    const auto sys = random_exact_system(rng, m, n, 20, 9);
    const Rational eps(1 + trial % 5, 7);
    const auto w = psi_approx_witnesses(sys, PsiFunction::inverse(eps), 8);
    std::set<IntVector> listed;
    for (const auto& c : w) listed.insert(c.q);
    for_each_in_box(n, 8, [&](const std::vector<std::int64_t>& qi) {
      IntVector q(qi.begin(), qi.end());
      if (sup_norm(std::span<const Integer>(q)) == 0) return;
      EXPECT_EQ(listed.count(q) == 1, brute_product(sys, qi) <= eps);
    });
  }
}

TEST(Psi, TableValidationAndInterpolation) {
  EXPECT_THROW(PsiFunction::table({{1, 0.5}, {2, 0.6}}), ParameterError);
  EXPECT_THROW(PsiFunction::table({{1, 0.5}, {1, 0.4}}), ParameterError);
  EXPECT_THROW(PsiFunction::table({{1, 0.0}}), ParameterError);
  EXPECT_THROW(PsiFunction::inverse(Scalar(0)), ParameterError);
  const auto psi = PsiFunction::table({{1, 1.0}, {3, 0.5}});
  EXPECT_DOUBLE_EQ(psi(0.5), 1.0);
  EXPECT_DOUBLE_EQ(psi(2), 0.75);
  EXPECT_DOUBLE_EQ(psi(10), 0.5);
  // table psi on <0, 1/2>: residual 1/2 admitted while psi(|q|) >= 1/2
  const auto w = psi_approx_witnesses(one_by_one(0, Rational(1, 2)), psi, 10);
  EXPECT_EQ(w.size(), 20u);
}
