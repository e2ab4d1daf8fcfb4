#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "concentrix/error.hpp"
#include "concentrix/mc.hpp"
#include "concentrix/models.hpp"
#include "concentrix/rng.hpp"
#include "test_util.hpp"

using namespace concentrix;
using concentrix::testing::max_abs_diff;
using concentrix::testing::random_dense;

TEST(Philox, KnownAnswers) {
  const auto z = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(z[0], 0x6627e8d5u);
  EXPECT_EQ(z[1], 0xe169c58du);
  EXPECT_EQ(z[2], 0xbc57ac4cu);
  EXPECT_EQ(z[3], 0x9b00dbd8u);
  const auto f = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(f[0], 0x408f276du);
  EXPECT_EQ(f[1], 0x41c83b0eu);
  EXPECT_EQ(f[2], 0xa20bc7c6u);
  EXPECT_EQ(f[3], 0x6d5451fdu);
}

TEST(RandomStream, DeterministicAndSplit) {
  RandomStream a(7), b(7), c(8);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    (void)c;
  }
  RandomStream base(7);
  RandomStream s1 = base.split(1), s1b = base.split(1), s2 = base.split(2);
  EXPECT_EQ(s1.next_u64(), s1b.next_u64());
  EXPECT_NE(RandomStream(7).split(1).next_u64(), s2.next_u64());
  EXPECT_NE(RandomStream(7).next_u64(), RandomStream(8).next_u64());
}

TEST(RandomStream, Distributions) {
  RandomStream r(9);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(double(n)));
  EXPECT_NEAR(sq / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  int heads = 0;
  for (int i = 0; i < n; ++i) heads += r.rademacher() > 0;
  EXPECT_NEAR(double(heads) / n, 0.5, 4.0 * 0.5 / std::sqrt(double(n)));
  for (int i = 0; i < 1000; ++i) ASSERT_LT(r.below(7), 7u);
}

TEST(AliasTable, Frequencies) {
  const std::vector<double> p = {0.5, 0.25, 0.125, 0.125, 0.0};
  AliasTable t(p);
  RandomStream r(10);
  std::vector<int> counts(p.size(), 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[t.sample(r)];
  EXPECT_EQ(counts[4], 0);
  for (std::size_t k = 0; k < 4; ++k)
    EXPECT_NEAR(double(counts[k]) / n, p[k], 4.0 * std::sqrt(p[k] * (1 - p[k]) / n));
}

TEST(SeriesModels, WignerStructure) {
  const SeriesCoefficients w = make_wigner(5);
  EXPECT_TRUE(w.symmetric());
  EXPECT_EQ(w.size(), 10u);
  RandomStream r(11);
  const DenseMatrix z = sample_series(w, r);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(z(i, i), 0.0);
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(z(i, j), z(j, i));
  }
}

TEST(SeriesModels, ToeplitzConstantDiagonals) {
  RandomStream r(12);
  const DenseMatrix z = sample_series(make_toeplitz(6), r);
  for (std::size_t i = 1; i < 6; ++i)
    for (std::size_t j = 1; j < 6; ++j) EXPECT_EQ(z(i, j), z(i - 1, j - 1));
}

TEST(SeriesModels, RademacherSingleCoefficient) {
  const DenseMatrix b = DenseMatrix::from_rows({{1, 2}, {3, 4}});
  const SeriesCoefficients s({b}, Modulator::rademacher);
  RandomStream r(13);
  int plus = 0;
  for (int i = 0; i < 2000; ++i) {
    const DenseMatrix z = sample_series(s, r);
    if (z == b) ++plus;
    else EXPECT_EQ(z, -1.0 * b);
  }
  EXPECT_NEAR(plus / 2000.0, 0.5, 0.05);
}

TEST(Maxqp, ExamplesAndConstraints) {
  const DenseMatrix b = DenseMatrix::from_rows({{1, 0}, {0, 0}});
  RandomStream r(14);
  const DenseMatrix z = maxqp_round({b}, r);
  EXPECT_NEAR(spectral_norm(z), maxqp_alpha(2, 2), 1e-15);
  EXPECT_NEAR(maxqp_alpha(2, 2), 1.0 / std::sqrt(2 * std::log(4.0)), 1e-15);
  try {
    maxqp_round({DenseMatrix::identity(2), DenseMatrix::identity(2)}, r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConstraintViolated);
  }
}

TEST(Sparsify, NnzAndUnbiased) {
  const DenseMatrix b = DenseMatrix::from_rows({{1, -2, 0}, {0.5, 3, 1}});
  const SamplerModel m = sparsify_model(b);
  RandomStream r(15);
  const DenseMatrix few = sample_estimator(m, 3, r);
  std::size_t nnz = 0;
  for (double x : few.entries()) nnz += x != 0.0;
  EXPECT_LE(nnz, 3u);
  const std::size_t n = 100000;
  const DenseMatrix est = sample_estimator(m, n, r);
  for (std::size_t i = 0; i < b.entries().size(); ++i) {
    const double x = b.entries()[i], p = m.probabilities[i];
    if (x == 0.0) {
      EXPECT_EQ(est.entries()[i], 0.0);
      continue;
    }
    const double sd = std::sqrt((x * x / p - x * x) / double(n));
    EXPECT_NEAR(est.entries()[i], x, 3.0 * sd);
  }
  EXPECT_THROW(sparsify_model(DenseMatrix(2, 2)), Error);
}

TEST(Rmm, RankOneDrawsAndUnbiased) {
  RandomStream fx(16);
  const DenseMatrix b = random_dense(4, 6, fx), c = random_dense(6, 3, fx);
  const SamplerModel m = rmm_model(b, c);
  RandomStream r(17);
  const auto sv = singular_values(draw(m, r));
  EXPECT_GT(sv[0], 0.0);
  for (std::size_t k = 1; k < sv.size(); ++k) EXPECT_LT(sv[k], 1e-10 * sv[0]);
  DenseMatrix acc(4, 3);
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) acc += draw(m, r);
  const DenseMatrix mean = (1.0 / trials) * acc;
  EXPECT_LT(max_abs_diff(mean, m.target), 0.1 * spectral_norm(m.target));
  EXPECT_THROW(rmm_model(b, b), Error);
}

TEST(Kernel, Examples) {
  KernelSpec ang;
  ang.kind = KernelKind::angular;
  ang.points = {{1.0, 2.0}, {1.0, 2.0}, {-1.0, 0.5}};
  RandomStream r(18);
  for (int i = 0; i < 200; ++i) {
    const auto z = feature_vector(ang, r);
    ASSERT_EQ(z.size(), 3u);
    EXPECT_EQ(z[0] * z[1], 1.0);
    for (double x : z) EXPECT_EQ(std::abs(x), 1.0);
  }
  KernelSpec one;
  one.points = {{0.3, -0.2}};
  const SymmetricMatrix k1 = kernel_matrix(one);
  EXPECT_EQ(k1.dim(), 1u);
  EXPECT_EQ(k1(0, 0), 1.0);
  EXPECT_NEAR(kernel_entry(ang, {1, 0}, {0, 1}), 0.0, 1e-15);
  EXPECT_NEAR(kernel_entry(ang, {1, 0}, {-1, 0}), -1.0, 1e-15);
  KernelSpec rbf;
  rbf.alpha = 2.0;
  EXPECT_NEAR(kernel_entry(rbf, {0, 0}, {1, 0}), std::exp(-1.0), 1e-15);
  EXPECT_THROW(kernel_entry(rbf, {0}, {1, 0}), Error);
}

TEST(Kernel, RbfFeaturesUnbiased) {
  KernelSpec rbf;
  rbf.alpha = 2.0;
  rbf.points = {{0.0, 0.0}, {1.0, 0.0}};
  RandomStream r(19);
  const int n = 40000;
  double s = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const auto z = feature_vector(rbf, r);
    s += z[0] * z[1];
    sq += z[0] * z[1] * z[0] * z[1];
  }
  const double mean = s / n, se = std::sqrt((sq / n - mean * mean) / n);
  EXPECT_NEAR(mean, std::exp(-1.0), 4.0 * se);
}

TEST(Submatrix, Extremes) {
  RandomStream fx(20);
  const DenseMatrix b = random_dense(3, 5, fx);
  RandomStream r(21);
  EXPECT_EQ(column_submatrix(b, 5.0, r), b);
  EXPECT_EQ(column_submatrix(b, 0.0, r), DenseMatrix(3, 5));
  EXPECT_EQ(row_column_submatrix(b, 3.0, 5.0, r), b);
  EXPECT_THROW(column_submatrix(b, 6.0, r), Error);
  const SamplerModel m = column_submatrix_model(b, 2.0);
  EXPECT_LT(max_abs_diff(m.target, 0.4 * b), 1e-15);
}

TEST(ErLaplacian, CompleteGraphAndCompression) {
  RandomStream r(22);
  const std::size_t n = 7;
  const SymmetricMatrix l = er_laplacian(n, 1.0, r);
  const auto ev = sym_eigvals(l).eigenvalues;
  EXPECT_NEAR(ev[n - 1], 0.0, 1e-12);
  EXPECT_NEAR(ev[n - 2], double(n), 1e-12);
  EXPECT_TRUE(is_connected(l));
  const SymmetricMatrix c = compress_laplacian(l);
  EXPECT_EQ(c.dim(), n - 1);
  EXPECT_NEAR(lambda_min(c), double(n), 1e-12);
  // Laplacians kill the constant vector and square to n times themselves here.
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < n; ++j) row += l(i, j);
    EXPECT_EQ(row, 0.0);
  }
  EXPECT_LT(max_abs_diff(multiply(l.dense(), l.dense()), double(n) * l.dense()), 1e-12);
  const SymmetricMatrix empty = er_laplacian(n, 0.0, r);
  EXPECT_FALSE(is_connected(empty));
  EXPECT_THROW(er_laplacian(1, 0.5, r), Error);
}

TEST(ErLaplacian, CompressionKeepsNonzeroSpectrum) {
  RandomStream r(23);
  const SymmetricMatrix l = er_laplacian(12, 0.4, r);
  const auto full = sym_eigvals(l).eigenvalues;
  const auto comp = sym_eigvals(compress_laplacian(l)).eigenvalues;
  for (std::size_t k = 0; k + 1 < full.size(); ++k) EXPECT_NEAR(full[k], comp[k], 1e-10);
}

TEST(Covariance, IdentityConvergesAndErrors) {
  const std::size_t p = 4;
  const SamplerModel m = covariance_model(DenseMatrix::identity(p), 60.0);
  RandomStream r(24);
  const SymmetricMatrix y = sample_covariance(m, 40000, r);
  // Entry sd is about sqrt(2/n) on the diagonal and sqrt(1/n) off it.
  EXPECT_LT(max_abs_diff(y.dense(), DenseMatrix::identity(p)), 5.0 * std::sqrt(2.0 / 40000));
  for (int i = 0; i < 100; ++i) {
    const auto x = covariance_vector(m, r);
    double s = 0;
    for (double v : x) s += v * v;
    EXPECT_LE(s, 60.0);
  }
  EXPECT_THROW(covariance_model(DenseMatrix::identity(p), 0.5), Error);
  EXPECT_THROW(sample_covariance(m, 0, r), Error);
}

TEST(Models, KindNames) {
  for (ModelKind k : {ModelKind::sparsify, ModelKind::rmm, ModelKind::kernelFeatures, ModelKind::columnSubmatrix,
                      ModelKind::rowColumnSubmatrix, ModelKind::covariance, ModelKind::erLaplacian,
                      ModelKind::gaussianSeries, ModelKind::maxqp})
    EXPECT_EQ(model_kind_from_string(to_string(k)), k);
  EXPECT_THROW(model_kind_from_string("nope"), Error);
}
