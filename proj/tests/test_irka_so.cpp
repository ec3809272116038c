#include <gtest/gtest.h>

#include "morkit/irka_so.hpp"
#include "morkit/models.hpp"
#include "test_util.hpp"

using namespace morkit;
using namespace morkit::testing;

namespace {

IrkaOptions options(Index r, int max_iter = 100) {
  IrkaOptions o;
  o.r = r;
  o.max_iter = max_iter;
  return o;
}

// Direct solves of the linearized shifted systems:
//   [a I, -I; K, a M + D] [x1; x2] = [0; H b]
//   [a I, K^T; -I, a M^T + D^T] [y1; y2] = [L^T c; 0]
ProjectorColumns block_solve(const SecondOrderSystem& s, Complex a, const VectorC& b, const VectorC& c) {
  const Index n = s.n();
  const DenseMatrixC I = DenseMatrixC::Identity(n, n);
  const DenseMatrixC M = DenseMatrix(s.M).cast<Complex>();
  const DenseMatrixC D = DenseMatrix(s.D).cast<Complex>();
  const DenseMatrixC K = DenseMatrix(s.K).cast<Complex>();
  DenseMatrixC right(2 * n, 2 * n), left(2 * n, 2 * n);
  right << a * I, -I, K, a * M + D;
  left << a * I, K.transpose(), -I, a * M.transpose() + D.transpose();
  VectorC rb = VectorC::Zero(2 * n), lb = VectorC::Zero(2 * n);
  rb.tail(n) = s.H.cast<Complex>() * b;
  lb.head(n) = s.L.transpose().cast<Complex>() * c;
  const VectorC x = right.partialPivLu().solve(rb);
  const VectorC y = left.partialPivLu().solve(lb);
  return {x.head(n), x.tail(n), y.head(n), y.tail(n)};
}

double rel(const VectorC& a, const VectorC& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST(ProjectorColumns, ScalarSubstitution) {
  const ProjectorColumns pc = projector_columns_so(scalar_sos(1.0, 0.0, 1.0), 1.0);
  EXPECT_NEAR(std::abs(pc.v1(0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(pc.v2(0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(pc.w2(0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(pc.w1(0) - 0.5), 0.0, 1e-15);
}

TEST(ProjectorColumns, ZeroShift) {
  const SecondOrderSystem s = random_sos(10, 1, 1, 1);
  const ProjectorColumns pc = projector_columns_so(s, 0.0);
  const VectorC expect = DenseMatrix(s.K).partialPivLu().solve(s.H).cast<Complex>();
  EXPECT_LE(rel(pc.v1, expect), 1e-12);
  EXPECT_EQ(pc.v2.norm(), 0.0);
}

TEST(ProjectorColumns, MatchBlockSystemSolves) {
  const SecondOrderSystem s = random_sos(50, 2, 3, 2);
  VectorC b(2), c(3);
  b << Complex(0.6, 0.2), 0.3;
  c << 1.0, Complex(0.0, -1.0), 0.5;
  for (const Complex a : {Complex(0.3), Complex(1.0, 2.0), Complex(4.0, -7.0)}) {
    const ProjectorColumns pc = projector_columns_so(s, a, b, c);
    const ProjectorColumns ref = block_solve(s, a, b, c);
    EXPECT_LE(rel(pc.v1, ref.v1), 1e-10);
    EXPECT_LE(rel(pc.v2, ref.v2), 1e-10);
    EXPECT_LE(rel(pc.w1, ref.w1), 1e-10);
    EXPECT_LE(rel(pc.w2, ref.w2), 1e-10);
  }
}

TEST(ProjectorColumns, SingularPencilRejected) {
  EXPECT_THROW(projector_columns_so(scalar_sos(1.0, 0.0, 1.0), Complex(0.0, 1.0)), Error);
}

TEST(AssembleProjectors, SingleRealShiftGivesUnitColumns) {
  const SecondOrderSystem s = random_sos(12, 1, 1, 3);
  const ProjectionPair pp = assemble_projectors_so(s, make_siso_shift_set({1.5}));
  for (const DenseMatrix* m : {&pp.Vp, &pp.Vv, &pp.Wp, &pp.Wv}) {
    ASSERT_EQ(m->cols(), 1);
    EXPECT_NEAR(m->norm(), 1.0, 1e-14);
  }
  EXPECT_LE(1.0 - std::abs(pp.Vp.col(0).dot(pp.Vv.col(0))), 1e-13);
}

TEST(AssembleProjectors, ConjugatePairGivesRealTwoColumnBlocks) {
  const SecondOrderSystem s = random_sos(12, 1, 1, 4);
  const ProjectionPair pp = assemble_projectors_so(s, make_siso_shift_set({Complex(0.5, 2.0), Complex(0.5, -2.0)}));
  for (const DenseMatrix* m : {&pp.Vp, &pp.Vv, &pp.Wp, &pp.Wv}) {
    ASSERT_EQ(m->cols(), 2);
    EXPECT_LE((m->transpose() * *m - DenseMatrix::Identity(2, 2)).norm(), 1e-13);
  }
  EXPECT_EQ(pp.V.rows(), 24);
  EXPECT_EQ(pp.V.cols(), 2);
}

TEST(AssembleProjectors, RankCollapseNamesBlock) {
  const SecondOrderSystem s = random_sos(12, 1, 1, 5);
  try {
    assemble_projectors_so(s, make_siso_shift_set({1.0, 1.0}));
    FAIL() << "expected RankDeficient";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
    const std::string msg = e.what();
    EXPECT_TRUE(msg.find("block") != std::string::npos || msg.find("projector") != std::string::npos) << msg;
  }
}

TEST(ReduceSo, IdentityProjectionReproducesSystem) {
  const SecondOrderSystem s = random_sos(6, 1, 2, 6);
  ProjectionPair pp;
  pp.Vp = pp.Wp = pp.Vv = pp.Wv = DenseMatrix::Identity(6, 6);
  for (const Level level : {Level::Position, Level::Velocity}) {
    const ReducedSecondOrderSystem rom = reduce_so(s, pp, level);
    EXPECT_EQ(rom.level, level);
    EXPECT_LE((rom.M - DenseMatrix(s.M)).norm(), 1e-14);
    EXPECT_LE((rom.K - DenseMatrix(s.K)).norm(), 1e-14);
    EXPECT_LE((rom.H - s.H).norm(), 1e-14);
  }
}

TEST(ReduceSo, ScalarUnitProjection) {
  const SecondOrderSystem s = scalar_sos(2.0, 3.0, 5.0, 7.0, 11.0);
  ProjectionPair pp;
  pp.Vp = pp.Wp = pp.Vv = pp.Wv = DenseMatrix::Ones(1, 1);
  const ReducedSecondOrderSystem rom = reduce_so(s, pp, Level::Velocity);
  EXPECT_EQ(rom.M(0, 0), 2.0);
  EXPECT_EQ(rom.D(0, 0), 3.0);
  EXPECT_EQ(rom.K(0, 0), 5.0);
  EXPECT_EQ(rom.H(0, 0), 7.0);
  EXPECT_EQ(rom.L(0, 0), 11.0);
}

TEST(ReduceStacked, MatchesFirstOrderProjection) {
  const SecondOrderSystem s = random_sos(15, 1, 1, 7);
  const ProjectionPair pp = assemble_projectors_so(s, make_siso_shift_set({0.4, Complex(1.0, 3.0), Complex(1.0, -3.0)}));
  const ReducedFirstOrderSystem a = reduce_stacked(s, pp);
  const ReducedFirstOrderSystem b = reduce_fo(linearize(s), pp);
  EXPECT_LE((a.E - b.E).norm(), 1e-13 * b.E.norm());
  EXPECT_LE((a.A - b.A).norm(), 1e-13 * b.A.norm());
  EXPECT_LE((a.B - b.B).norm(), 1e-13 * b.B.norm());
  EXPECT_LE((a.C - b.C).norm(), 1e-13 * b.C.norm());
}

TEST(ReduceStacked, InterpolatesAtShifts) {
  const SecondOrderSystem s = random_sos(40, 1, 1, 8);
  const ShiftSet shifts = make_siso_shift_set({0.4, Complex(1.0, 3.0), Complex(1.0, -3.0)});
  const ReducedFirstOrderSystem rom = reduce_stacked(s, assemble_projectors_so(s, shifts));
  for (const auto& r : check_interpolation(s, rom, shifts)) EXPECT_TRUE(r.ok) << r.shift;
}

TEST(ReduceSo, VelocityLevelInterpolates) {
  const SecondOrderSystem s = random_sos(40, 2, 2, 9);
  DenseMatrixC b(2, 2), c(2, 2);
  b.col(0) << 1.0, Complex(0.0, 1.0);
  b.col(1) = b.col(0).conjugate();
  c.col(0) << Complex(0.5, 0.5), 1.0;
  c.col(1) = c.col(0).conjugate();
  const ShiftSet shifts = make_shift_set({Complex(0.8, 2.0), Complex(0.8, -2.0)}, b, c);
  const ProjectionPair pp = assemble_projectors_so(s, shifts);
  const ReducedSecondOrderSystem vel = reduce_so(s, pp, Level::Velocity);
  for (const auto& r : check_interpolation(s, vel, shifts)) EXPECT_TRUE(r.ok) << r.shift;
  const ReducedSecondOrderSystem pos = reduce_so(s, pp, Level::Position);
  for (const auto& r : check_interpolation(s, pos, shifts)) EXPECT_LE(r.right_rel, 1e-8) << r.shift;
}

TEST(Spmor, FullOrderReproducesTransferFunction) {
  const SecondOrderSystem s = random_sos(5, 1, 1, 10);
  const SpmorResult res = spmor_siso(s, options(5));
  for (double w : {0.01, 0.5, 1.0, 3.0, 50.0}) {
    const DenseMatrixC g = tf_eval(s, Complex(0.0, w));
    EXPECT_LE(rel_diff(g, tf_eval(res.position_rom, Complex(0.0, w))), 1e-10);
    EXPECT_LE(rel_diff(g, tf_eval(res.velocity_rom, Complex(0.0, w))), 1e-10);
  }
}

TEST(Spmor, ScalarIsExact) {
  const SecondOrderSystem s = scalar_sos(1.0, 2.0, 1.0);
  const SpmorResult res = spmor_siso(s, options(1));
  EXPECT_LE(rel_diff(tf_eval(s, Complex(0.0, 1.0)), tf_eval(res.position_rom, Complex(0.0, 1.0))), 1e-12);
  EXPECT_LE(rel_diff(tf_eval(s, Complex(0.0, 1.0)), tf_eval(res.velocity_rom, Complex(0.0, 1.0))), 1e-12);
}

TEST(Spmor, MimoDimensionsThreeByThree) {
  const SecondOrderSystem s = chain_sos(270, 3, 3, 11);
  const SpmorResult res = spmor_mimo(s, options(20, 3));
  for (const ReducedSecondOrderSystem* rom : {&res.position_rom, &res.velocity_rom}) {
    EXPECT_EQ(rom->n(), 20);
    EXPECT_EQ(rom->H.rows(), 20);
    EXPECT_EQ(rom->H.cols(), 3);
    EXPECT_EQ(rom->L.rows(), 3);
    EXPECT_EQ(rom->L.cols(), 20);
  }
}

TEST(Spmor, SisoDimensions) {
  const SecondOrderSystem s = chain_sos(348, 1, 1, 12);
  const SpmorResult res = spmor_siso(s, options(30, 3));
  EXPECT_EQ(res.position_rom.n(), 30);
  EXPECT_EQ(res.velocity_rom.n(), 30);
  EXPECT_EQ(res.report.iterations, 3);
}

TEST(Spmor, LargeOscillatorDimensions) {
  SomParams p;
  p.n1 = 3000;
  const SecondOrderSystem s = build_som(p);
  ASSERT_EQ(s.n(), 9001);
  // Fifty real log-spaced shifts give a numerically rank-deficient basis on
  // this model; lightly damped pairs covering its slow modes do not.
  std::vector<Complex> shifts;
  for (int i = 0; i < 25; ++i) {
    const double w = 1e-3 * std::pow(3e4, i / 24.0);
    shifts.emplace_back(0.02 * w, w);
    shifts.emplace_back(0.02 * w, -w);
  }
  IrkaOptions o = options(50, 2);
  o.init = ShiftInit::User;
  o.user_shifts = make_siso_shift_set(shifts);
  const SpmorResult res = spmor_siso(s, o);
  EXPECT_EQ(res.position_rom.n(), 50);
  EXPECT_EQ(res.velocity_rom.n(), 50);
  EXPECT_EQ(res.position_rom.H.cols(), 1);
}

TEST(Spmor, SisoRejectsMimo) {
  EXPECT_THROW(spmor_siso(random_sos(6, 2, 1, 13), options(2)), Error);
}

TEST(Spmor, OrderValidated) {
  EXPECT_THROW(spmor_siso(random_sos(6, 1, 1, 14), options(7)), Error);
}

TEST(Spmor, Deterministic) {
  const SecondOrderSystem s = random_sos(30, 1, 1, 15);
  const SpmorResult a = spmor_siso(s, options(4, 10));
  const SpmorResult b = spmor_siso(s, options(4, 10));
  EXPECT_EQ(a.position_rom.M, b.position_rom.M);
  EXPECT_EQ(a.velocity_rom.K, b.velocity_rom.K);
  EXPECT_EQ(a.report.shift_changes, b.report.shift_changes);
}
