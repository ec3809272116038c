#include <gtest/gtest.h>

#include <random>

#include "morkit/sysmodel.hpp"
#include "test_util.hpp"

using namespace morkit;
using namespace morkit::testing;

TEST(Linearize, ScalarSubstitution) {
  const FirstOrderSystem fo = linearize(scalar_sos(2.0, 3.0, 5.0, 7.0, 11.0));
  DenseMatrix E(2, 2), A(2, 2);
  E << 1, 0, 0, 2;
  A << 0, 1, -5, -3;
  EXPECT_EQ(DenseMatrix(fo.E), E);
  EXPECT_EQ(DenseMatrix(fo.A), A);
  EXPECT_EQ(fo.B, (DenseMatrix(2, 1) << 0, 7).finished());
  EXPECT_EQ(fo.C, (DenseMatrix(1, 2) << 11, 0).finished());
  EXPECT_EQ(fo.Da, DenseMatrix::Zero(1, 1));
}

TEST(Linearize, EmptySystem) {
  SecondOrderSystem s;
  s.M.resize(0, 0);
  s.D.resize(0, 0);
  s.K.resize(0, 0);
  s.H.resize(0, 1);
  s.L.resize(1, 0);
  const FirstOrderSystem fo = linearize(s);
  EXPECT_EQ(fo.n(), 0);
}

TEST(Linearize, NonzeroCountOfE) {
  const SecondOrderSystem s = random_sos(15, 1, 1, 2);
  EXPECT_EQ(linearize(s).E.nonZeros(), 15 + s.M.nonZeros());
}

TEST(Linearize, ReducedMatchesFull) {
  const SecondOrderSystem s = random_sos(6, 2, 1, 3);
  const ReducedFirstOrderSystem a = linearize(to_dense(s));
  const ReducedFirstOrderSystem b = to_dense(linearize(s));
  EXPECT_EQ(a.E, b.E);
  EXPECT_EQ(a.A, b.A);
  EXPECT_EQ(a.B, b.B);
  EXPECT_EQ(a.C, b.C);
}

TEST(Linearize, DimensionMismatchRejected) {
  SecondOrderSystem s = random_sos(4, 1, 1, 1);
  s.H = DenseMatrix::Ones(5, 1);
  EXPECT_THROW(linearize(s), Error);
}

TEST(TransferFunction, ScalarValues) {
  const SecondOrderSystem s = scalar_sos(1.0, 2.0, 1.0);
  EXPECT_NEAR(std::abs(tf_eval(s, 0.0)(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(tf_eval(s, Complex(0.0, 1.0))(0, 0) - Complex(0.0, -0.5)), 0.0, 1e-15);
}

TEST(TransferFunction, SingularResolventNamesPoint) {
  const SecondOrderSystem s = scalar_sos(1.0, 0.0, 1.0);
  try {
    tf_eval(s, Complex(0.0, 1.0));
    FAIL() << "expected ShiftOnSpectrum";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShiftOnSpectrum);
  }
  EXPECT_THROW(tf_eval(to_dense(s), Complex(0.0, 1.0)), Error);
}

TEST(TransferFunction, SecondOrderEqualsLinearization) {
  const SecondOrderSystem s = random_sos(20, 2, 3, 5);
  const FirstOrderSystem fo = linearize(s);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(-20.0, 20.0);
  for (int i = 0; i < 20; ++i) {
    const Complex z(re(rng), im(rng));
    EXPECT_LE(rel_diff(tf_eval(s, z), tf_eval(fo, z)), 1e-12) << z;
    EXPECT_LE(rel_diff(tf_eval(to_dense(s), z), tf_eval(fo, z)), 1e-12) << z;
  }
}

TEST(FrequencyGrid, LogspaceEnds) {
  const FrequencyGrid g = FrequencyGrid::logspace(1.0, 100.0, 3);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g.points()[0], 1.0);
  EXPECT_NEAR(g.points()[1], 10.0, 1e-12);
  EXPECT_DOUBLE_EQ(g.points()[2], 100.0);
  EXPECT_EQ(FrequencyGrid::default_grid().size(), 200u);
}

TEST(FrequencyGrid, InvalidGridsRejected) {
  EXPECT_THROW(FrequencyGrid({0.0, 1.0}), Error);
  EXPECT_THROW(FrequencyGrid({2.0, 1.0}), Error);
  EXPECT_THROW(FrequencyGrid(std::vector<double>{}), Error);
  EXPECT_THROW(FrequencyGrid::logspace(1.0, 2.0, 0), Error);
}

TEST(SigmaSweep, ScalarValues) {
  const SecondOrderSystem s = scalar_sos(1.0, 2.0, 1.0);
  const auto pts = sigma_sweep(s, FrequencyGrid({1.0, 1e3}));
  EXPECT_NEAR(pts[0].sigma, 0.5, 1e-15);
  EXPECT_NEAR(pts[1].sigma, 1e-6, 1e-8);
}

TEST(SigmaSweep, SinglePointGrid) {
  const auto pts = sigma_sweep(scalar_sos(1.0, 1.0, 1.0), FrequencyGrid({1.0}));
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_DOUBLE_EQ(pts[0].omega, 1.0);
  EXPECT_NEAR(pts[0].sigma, 1.0, 1e-15);
}

TEST(ErrorSweep, IdenticalSystemsGiveZero) {
  const SecondOrderSystem s = random_sos(8, 1, 1, 6);
  for (const auto& p : error_sweep(s, to_dense(s), FrequencyGrid::default_grid())) {
    EXPECT_LE(p.abs_err, 1e-12 * (1.0 + sigma_max(tf_eval(s, Complex(0.0, p.omega)))));
  }
}

TEST(ErrorSweep, ScaledModelGivesConstantRelativeError) {
  const SecondOrderSystem s = scalar_sos(1.0, 2.0, 1.0);
  ReducedSecondOrderSystem r = to_dense(s);
  r.H *= 0.9;
  for (const auto& p : error_sweep(s, r, FrequencyGrid::logspace(1e-2, 1e2, 20))) {
    ASSERT_TRUE(p.rel_err.has_value());
    EXPECT_NEAR(*p.rel_err, 0.1, 1e-12);
  }
}

TEST(ErrorSweep, ZeroGainHasNoRelativeError) {
  const SecondOrderSystem s = scalar_sos(1.0, 2.0, 1.0, 0.0, 1.0);
  const auto pts = error_sweep(s, to_dense(s), FrequencyGrid({1.0}));
  EXPECT_FALSE(pts[0].rel_err.has_value());
  EXPECT_NE(error_csv(pts).find(",\n"), std::string::npos);
}

TEST(Stability, ScalarCases) {
  const StabilityInfo a = is_stable(to_dense(scalar_sos(1.0, 2.0, 1.0)));
  EXPECT_TRUE(a.stable);
  EXPECT_NEAR(a.abscissa, -1.0, 1e-7);
  EXPECT_FALSE(is_stable(to_dense(scalar_sos(1.0, 0.0, -1.0))).stable);
}

TEST(Stability, FullModelRequiresOptIn) {
  DenseLimits lim;
  lim.small_dense = 4;
  const SecondOrderSystem s = random_sos(5, 1, 1, 9);
  EXPECT_THROW(is_stable(s, false, lim), Error);
  EXPECT_TRUE(is_stable(s, true, lim).stable);
}

TEST(Csv, HeadersAndRowCount) {
  const auto pts = sigma_sweep(scalar_sos(1.0, 2.0, 1.0), FrequencyGrid::default_grid());
  const std::string csv = sigma_csv(pts);
  EXPECT_EQ(csv.rfind("omega,sigma\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 201);
}
