#include "morkit/irka_so.hpp"

#include "irka_loop.hpp"
#include "morkit/numkernel.hpp"

namespace morkit {

namespace {

DenseMatrixC stack(const DenseMatrixC& top, const DenseMatrixC& bottom) {
  DenseMatrixC out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

ProjectorColumns columns_from(const SecondOrderSystem& sos, Complex alpha, const VectorC& hb,
                              Complex beta, const VectorC& ltc) {
  ProjectorColumns out;
  const Factorization fa = assemble_quadratic_pencil(sos.M, sos.D, sos.K, alpha);
  out.v1 = fa.solve(hb);
  out.v2 = alpha * out.v1;
  if (beta == alpha) {
    out.w2 = fa.solve_transposed(ltc);
  } else {
    out.w2 = assemble_quadratic_pencil(sos.M, sos.D, sos.K, beta).solve_transposed(ltc);
  }
  out.w1 = beta * (SparseMatrix(sos.M.transpose()).cast<Complex>() * out.w2) +
           SparseMatrix(sos.D.transpose()).cast<Complex>() * out.w2;
  return out;
}

void check_vector(const VectorC& v, Index size, const char* what) {
  if (v.size() != size) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " has length " + std::to_string(v.size()) + ", expected " +
                    std::to_string(size));
  }
}

DenseMatrix basis(const DenseMatrixC& cols, const std::vector<Complex>& shifts, const std::string& what) {
  return orthonormal_basis(realify_columns(cols, shifts), what);
}

ProjectionPair stacked_projectors(const RawProjectorBlocks& raw, const ShiftSet& shifts) {
  ProjectionPair pp;
  pp.V = basis(stack(raw.Vp, raw.Vv), shifts.shifts, "stacked projector V");
  pp.W = basis(stack(raw.Wp, raw.Wv), shifts.left_shifts, "stacked projector W");
  return pp;
}

void check_reduced_e(const DenseMatrix& e) {
  if (e.rows() == 0) return;
  const Eigen::PartialPivLU<DenseMatrix> lu(e);
  if (!(lu.rcond() > 1e-14)) {
    throw Error(ErrorCode::SingularMatrix,
                "reduced E = W^T E V is singular (rcond " + format_real(lu.rcond()) + ")");
  }
}

void add_stability_warnings(const SecondOrderSystem& sos, const SpmorResult& res,
                            const DenseLimits& limits, IrkaReport& report) {
  if (2 * sos.n() <= limits.small_dense) {
    if (!is_stable(sos, true, limits).stable) report.warnings.push_back("full model is not stable");
  } else {
    report.warnings.push_back("stability of the full model was not verified");
  }
  if (!is_stable(res.position_rom, limits).stable) {
    report.warnings.push_back("position reduced model is not stable");
  }
  if (!is_stable(res.velocity_rom, limits).stable) {
    report.warnings.push_back("velocity reduced model is not stable");
  }
}

}  // namespace

ProjectorColumns projector_columns_so(const SecondOrderSystem& sos, Complex alpha, const VectorC& b,
                                      const VectorC& c) {
  sos.validate();
  check_vector(b, sos.inputs(), "input direction");
  check_vector(c, sos.outputs(), "output direction");
  const VectorC hb = sos.H.cast<Complex>() * b;
  const VectorC ltc = sos.L.transpose().cast<Complex>() * c;
  return columns_from(sos, alpha, hb, alpha, ltc);
}

ProjectorColumns projector_columns_so(const SecondOrderSystem& sos, Complex alpha) {
  sos.validate();
  if (sos.inputs() != 1 || sos.outputs() != 1) {
    throw Error(ErrorCode::InvalidArgument, "direction-free projector columns need a SISO system");
  }
  const VectorC hb = sos.H.col(0).cast<Complex>();
  const VectorC ltc = sos.L.row(0).transpose().cast<Complex>();
  return columns_from(sos, alpha, hb, alpha, ltc);
}

RawProjectorBlocks raw_projector_blocks(const SecondOrderSystem& sos, const ShiftSet& shifts) {
  sos.validate();
  shifts.validate(sos.inputs(), sos.outputs());
  const Index n = sos.n();
  const Index r = shifts.size();
  const std::vector<Index> right_partner = conjugate_partners(shifts.shifts);
  const std::vector<Index> left_partner = conjugate_partners(shifts.left_shifts);
  const DenseMatrixC hb = sos.H.cast<Complex>() * shifts.right_dirs;
  const DenseMatrixC ltc = sos.L.transpose().cast<Complex>() * shifts.left_dirs;
  RawProjectorBlocks raw{DenseMatrixC(n, r), DenseMatrixC(n, r), DenseMatrixC(n, r), DenseMatrixC(n, r)};
  for (Index i = 0; i < r; ++i) {
    const bool right_done = right_partner[i] >= 0 && right_partner[i] < i;
    const bool left_done = left_partner[i] >= 0 && left_partner[i] < i;
    if (right_done && left_done) {
      raw.Vp.col(i) = raw.Vp.col(right_partner[i]).conjugate();
      raw.Vv.col(i) = raw.Vv.col(right_partner[i]).conjugate();
      raw.Wp.col(i) = raw.Wp.col(left_partner[i]).conjugate();
      raw.Wv.col(i) = raw.Wv.col(left_partner[i]).conjugate();
      continue;
    }
    const ProjectorColumns c =
        columns_from(sos, shifts.shifts[i], hb.col(i), shifts.left_shifts[i], ltc.col(i));
    raw.Vp.col(i) = c.v1;
    raw.Vv.col(i) = c.v2;
    raw.Wp.col(i) = c.w1;
    raw.Wv.col(i) = c.w2;
  }
  return raw;
}

ProjectionPair assemble_projectors_so(const SecondOrderSystem& sos, const ShiftSet& shifts) {
  const RawProjectorBlocks raw = raw_projector_blocks(sos, shifts);
  ProjectionPair pp = stacked_projectors(raw, shifts);
  pp.Vp = basis(raw.Vp, shifts.shifts, "position block Vp");
  pp.Vv = basis(raw.Vv, shifts.shifts, "velocity block Vv");
  pp.Wp = basis(raw.Wp, shifts.left_shifts, "position block Wp");
  pp.Wv = basis(raw.Wv, shifts.left_shifts, "velocity block Wv");
  return pp;
}

ReducedSecondOrderSystem reduce_so(const SecondOrderSystem& sos, const ProjectionPair& pp, Level level) {
  sos.validate();
  const DenseMatrix& V = level == Level::Position ? pp.Vp : pp.Vv;
  const DenseMatrix& W = level == Level::Position ? pp.Wp : pp.Wv;
  if (V.rows() != sos.n() || W.rows() != sos.n() || V.cols() != W.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(to_string(level)) + " projector blocks do not match the system");
  }
  ReducedSecondOrderSystem rom;
  rom.level = level;
  rom.M = W.transpose() * (sos.M * V);
  rom.D = W.transpose() * (sos.D * V);
  rom.K = W.transpose() * (sos.K * V);
  rom.H = W.transpose() * sos.H;
  rom.L = sos.L * V;
  return rom;
}

ReducedFirstOrderSystem reduce_stacked(const SecondOrderSystem& sos, const ProjectionPair& pp) {
  sos.validate();
  const Index n = sos.n();
  if (pp.V.rows() != 2 * n || pp.W.rows() != 2 * n || pp.V.cols() != pp.W.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "stacked projectors do not match the system");
  }
  const auto vt = pp.V.topRows(n);
  const auto vb = pp.V.bottomRows(n);
  const auto wt = pp.W.topRows(n);
  const auto wb = pp.W.bottomRows(n);
  ReducedFirstOrderSystem rom;
  rom.E = wt.transpose() * vt + wb.transpose() * (sos.M * vb);
  rom.A = wt.transpose() * vb - wb.transpose() * (sos.K * vt + sos.D * vb);
  rom.B = wb.transpose() * sos.H;
  rom.C = sos.L * vt;
  rom.Da = DenseMatrix::Zero(sos.outputs(), sos.inputs());
  check_reduced_e(rom.E);
  return rom;
}

SpmorResult spmor_mimo(const SecondOrderSystem& sos, const IrkaOptions& opts) {
  sos.validate();
  opts.validate(sos.n());
  if (sos.inputs() < 1 || sos.outputs() < 1) {
    throw Error(ErrorCode::InvalidArgument, "system needs at least one input and one output");
  }
  const bool tangential = sos.inputs() > 1 || sos.outputs() > 1;
  ShiftSet start = initial_shifts(opts, opts.band, sos.inputs(), sos.outputs());
  if (!tangential) {
    start.right_dirs.setOnes();
    start.left_dirs.setOnes();
  }
  SpmorResult result;
  ReducedFirstOrderSystem inner;
  result.report = detail::run_irka(
      [&](const ShiftSet& s) {
        return reduce_stacked(sos, stacked_projectors(raw_projector_blocks(sos, s), s));
      },
      std::move(start), opts, tangential, inner);
  ProjectionPair pp;
  try {
    pp = assemble_projectors_so(sos, result.report.final_shifts);
  } catch (const Error& e) {
    throw IrkaError(result.report.iterations + 1, e);
  }
  result.position_rom = reduce_so(sos, pp, Level::Position);
  result.velocity_rom = reduce_so(sos, pp, Level::Velocity);
  add_stability_warnings(sos, result, opts.limits, result.report);
  return result;
}

SpmorResult spmor_siso(const SecondOrderSystem& sos, const IrkaOptions& opts) {
  sos.validate();
  if (sos.inputs() != 1 || sos.outputs() != 1) {
    throw Error(ErrorCode::InvalidArgument, "spmor_siso needs a single-input single-output system");
  }
  return spmor_mimo(sos, opts);
}

}  // namespace morkit
