#include <gtest/gtest.h>

#include <cmath>

#include "concentrix/error.hpp"
#include "concentrix/models.hpp"
#include "concentrix/stats.hpp"
#include "test_util.hpp"

using namespace concentrix;
using concentrix::testing::random_dense;

TEST(SeriesVariance, WignerRectToeplitzExact) {
  for (std::size_t d : {2u, 3u, 10u, 50u}) {
    EXPECT_EQ(series_variance(make_wigner(d)).v, double(d - 1));
    EXPECT_EQ(series_variance(make_toeplitz(d)).v, double(d));
  }
  EXPECT_EQ(series_variance(make_rect_gaussian(100, 100)).v, 100.0);
  EXPECT_EQ(series_variance(make_rect_gaussian(50, 200)).v, 200.0);
  EXPECT_EQ(series_variance(make_rect_gaussian(7, 3)).v, 7.0);
}

TEST(SeriesVariance, ConstructorCounts) {
  EXPECT_EQ(make_wigner(3).size(), 3u);
  EXPECT_EQ(series_variance(make_wigner(3)).v, 2.0);
  EXPECT_EQ(make_toeplitz(4).size(), 7u);
  EXPECT_EQ(series_variance(make_toeplitz(4)).v, 4.0);
  const SeriesCoefficients s = make_signed(DenseMatrix::identity(2));
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(series_variance(s).v, 1.0);
}

TEST(SeriesVariance, ShapeMismatch) {
  SeriesCoefficients s(2, 2, Modulator::gaussian);
  try {
    s.add(DenseMatrix(3, 2));
    series_variance(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(SeriesVariance, SignScalingAndPermutation) {
  RandomStream rng(41);
  std::vector<DenseMatrix> cs;
  for (int k = 0; k < 5; ++k) cs.push_back(random_dense(3, 4, rng));
  const VarianceStats base = series_variance(SeriesCoefficients(cs, Modulator::gaussian));
  auto flipped = cs;
  for (auto& c : flipped) c *= -1.0;
  std::reverse(flipped.begin(), flipped.end());
  const VarianceStats f = series_variance(SeriesCoefficients(flipped, Modulator::gaussian));
  EXPECT_NEAR(f.v, base.v, 1e-12 * base.v);
  EXPECT_NEAR(*f.L, *base.L, 1e-12 * *base.L);
  auto scaled = cs;
  for (auto& c : scaled) c *= 2.5;
  const VarianceStats sc = series_variance(SeriesCoefficients(scaled, Modulator::gaussian));
  EXPECT_NEAR(sc.v, 6.25 * base.v, 1e-12 * sc.v);
  EXPECT_NEAR(*sc.L, 2.5 * *base.L, 1e-12 * *sc.L);
}

TEST(SignedVariance, ExamplesAndAgreement) {
  EXPECT_EQ(signed_matrix_variance(DenseMatrix::from_rows({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}})).v, 3.0);
  EXPECT_EQ(signed_matrix_variance(DenseMatrix::identity(4)).v, 1.0);
  EXPECT_EQ(signed_matrix_variance(DenseMatrix::from_rows({{3, 4}, {0, 0}})).v, 25.0);
  RandomStream rng(42);
  const DenseMatrix b = random_dense(6, 9, rng);
  EXPECT_NEAR(signed_matrix_variance(b).v, series_variance(make_signed(b)).v, 1e-12 * signed_matrix_variance(b).v);
}

TEST(WeakVariance, Examples) {
  const DenseMatrix b = DenseMatrix::from_rows({{1, 2}, {0, 1}, {3, 0}});
  const double n = spectral_norm(b);
  EXPECT_NEAR(weak_variance_approx(SeriesCoefficients({b}, Modulator::gaussian)), n * n, 1e-9);
  EXPECT_NEAR(weak_variance_approx(SeriesCoefficients({DenseMatrix::diagonal({1, 0}), DenseMatrix::diagonal({0, 1})},
                                                      Modulator::gaussian)),
              1.0, 1e-9);
  // Oracle from a brute-force search over pairs of unit vectors: sup = 4/3.
  const double w3 = weak_variance_approx(make_wigner(3));
  EXPECT_GE(w3, 4.0 / 3.0 - 1e-6);
  EXPECT_LE(w3, 2.0);
}

TEST(WeakVariance, SandwichedByVariance) {
  RandomStream rng(43);
  for (int rep = 0; rep < 15; ++rep) {
    std::vector<DenseMatrix> cs;
    const std::size_t d1 = 2 + rep % 3, d2 = 2 + rep % 4;
    for (int k = 0; k < 4; ++k) cs.push_back(random_dense(d1, d2, rng));
    const SeriesCoefficients s(cs, Modulator::gaussian);
    const double v = series_variance(s).v, w = weak_variance_approx(s);
    EXPECT_LE(w, v * (1 + 1e-9));
    EXPECT_LE(v, double(std::min(d1, d2)) * w * (1 + 1e-9));
    EXPECT_GE(weak_variance_approx(s, 16), w - 1e-12);
  }
}

TEST(ChernoffStats, ExamplesAndErrors) {
  const SymmetricMatrix m = SymmetricMatrix::diagonal({2, 1});
  const ChernoffStats s = chernoff_stats({m, m, m}, 2.0);
  EXPECT_NEAR(s.muMax, 6.0, 1e-12);
  EXPECT_NEAR(s.muMin, 3.0, 1e-12);
  EXPECT_EQ(s.dim, 2u);
  EXPECT_THROW(chernoff_stats({m, SymmetricMatrix::identity(3)}, 1.0), Error);
}

TEST(ChernoffStats, ColumnSubmatrixMeans) {
  RandomStream rng(44);
  const DenseMatrix b = random_dense(4, 10, rng);
  const double p = 3.0;
  std::vector<SymmetricMatrix> means;
  for (std::size_t k = 0; k < 10; ++k) {
    DenseMatrix col(4, 1);
    for (std::size_t i = 0; i < 4; ++i) col(i, 0) = b(i, k);
    means.push_back(SymmetricMatrix((p / 10.0) * gram_rows(col)));
  }
  const ChernoffStats s = chernoff_stats(means, 1.0);
  const auto sv = singular_values(b);
  EXPECT_NEAR(s.muMax, p / 10.0 * sv.front() * sv.front(), 1e-10 * s.muMax);
  EXPECT_NEAR(s.muMin, p / 10.0 * sv.back() * sv.back(), 1e-9 * s.muMax);
}

TEST(SamplerMoments, Examples) {
  const SamplerMoments sp = sampler_moments(sparsify_model(DenseMatrix::identity(2)));
  EXPECT_DOUBLE_EQ(sp.m2, 8.0);
  EXPECT_DOUBLE_EQ(sp.L, 4.0);
  // rmm with unit norms and average stable rank 2.
  const DenseMatrix b = DenseMatrix::from_rows({{1, 0, 0}, {0, 1, 0}});
  const SamplerMoments rm = sampler_moments(rmm_model(b, b.transpose()));
  EXPECT_NEAR(rm.m2, 4.0, 1e-12);
  EXPECT_NEAR(rm.L, 2.0, 1e-12);
  KernelSpec spec;
  spec.points = {{0.0}, {0.5}, {1.5}};
  const SamplerModel km = kernel_features_model(spec);
  const double g = spectral_norm(SymmetricMatrix(km.target));
  const SamplerMoments fm = sampler_moments(km);
  EXPECT_NEAR(fm.m2, 2.0 * 3.0 * g, 1e-12);
  EXPECT_NEAR(fm.L, 6.0, 1e-12);
  EXPECT_THROW(sampler_moments(er_laplacian_model(4, 0.5)), Error);
}

TEST(EmpiricalVariance, Examples) {
  const DenseMatrix c = DenseMatrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_NEAR(empirical_variance({c, c, c}).v, 0.0, 1e-14);
  EXPECT_NEAR(empirical_variance({DenseMatrix(1, 1, {1.0}), DenseMatrix(1, 1, {-1.0})}).v, 1.0, 1e-14);
  EXPECT_THROW(empirical_variance({c}), Error);
}

TEST(EmpiricalVariance, WignerMonteCarlo) {
  const SeriesCoefficients s = make_wigner(10);
  RandomStream rng(45);
  std::vector<DenseMatrix> draws;
  for (int i = 0; i < 10000; ++i) draws.push_back(sample_series(s, rng));
  const double v = empirical_variance(draws).v;
  EXPECT_GE(v, 0.9 * 9.0);
  EXPECT_LE(v, 1.1 * 9.0);
}
