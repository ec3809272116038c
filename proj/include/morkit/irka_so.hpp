#pragma once

#include "morkit/irka_fo.hpp"
#include "morkit/projection.hpp"
#include "morkit/sysmodel.hpp"

namespace morkit {

struct ProjectorColumns {
  VectorC v1, v2, w1, w2;
};

// v1 = (a^2 M + a D + K)^{-1} H b, v2 = a v1,
// w2 = (a^2 M^T + a D^T + K^T)^{-1} L^T c, w1 = (a M^T + D^T) w2.
ProjectorColumns projector_columns_so(const SecondOrderSystem& sos, Complex alpha, const VectorC& b,
                                      const VectorC& c);
// SISO form: H and L^T are used directly.
ProjectorColumns projector_columns_so(const SecondOrderSystem& sos, Complex alpha);

// Unorthonormalized complex blocks, one column per shift.
struct RawProjectorBlocks {
  DenseMatrixC Vp, Vv, Wp, Wv;
};
RawProjectorBlocks raw_projector_blocks(const SecondOrderSystem& sos, const ShiftSet& shifts);

// Realified blocks, each orthonormalized on its own, plus the orthonormalized
// stacked bases V = orth([Vp; Vv]) and W = orth([Wp; Wv]).
ProjectionPair assemble_projectors_so(const SecondOrderSystem& sos, const ShiftSet& shifts);

// Mhat = Wx^T M Vx, Dhat = Wx^T D Vx, Khat = Wx^T K Vx, Hhat = Wx^T H, Lhat = L Vx.
ReducedSecondOrderSystem reduce_so(const SecondOrderSystem& sos, const ProjectionPair& pp, Level level);

// First-order reduction of linearize(sos) by the stacked bases pp.V, pp.W,
// computed blockwise without forming the 2n x 2n model.
ReducedFirstOrderSystem reduce_stacked(const SecondOrderSystem& sos, const ProjectionPair& pp);

struct SpmorResult {
  ReducedSecondOrderSystem position_rom;
  ReducedSecondOrderSystem velocity_rom;
  IrkaReport report;
};

// opts.r counts reduced second-order coordinates; 1 <= r <= n.
SpmorResult spmor_mimo(const SecondOrderSystem& sos, const IrkaOptions& opts);
// Requires p = m = 1.
SpmorResult spmor_siso(const SecondOrderSystem& sos, const IrkaOptions& opts);

}  // namespace morkit
