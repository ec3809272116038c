#pragma once

#include <vector>

#include "morkit/types.hpp"

namespace morkit {

// Interpolation data. Column i of right_dirs (p x r) and left_dirs (m x r)
// belongs to shifts[i] and left_shifts[i].
struct ShiftSet {
  std::vector<Complex> shifts;
  std::vector<Complex> left_shifts;
  DenseMatrixC right_dirs;
  DenseMatrixC left_dirs;

  Index size() const { return static_cast<Index>(shifts.size()); }

  // Checks sizes, Re(shift) > 0, and closure under conjugation (with
  // conjugated directions). Throws InvalidArgument.
  void validate(Index inputs, Index outputs) const;
};

// Shifts with unit directions and beta_i = alpha_i.
ShiftSet make_shift_set(std::vector<Complex> shifts, DenseMatrixC right_dirs, DenseMatrixC left_dirs);
// SISO shift set: all directions are the scalar 1.
ShiftSet make_siso_shift_set(std::vector<Complex> shifts);

// For each shift, the index of its conjugate partner, or -1 for a real shift.
// Throws InvalidArgument when a non-real shift has no partner.
std::vector<Index> conjugate_partners(const std::vector<Complex>& shifts);

// Replaces each conjugate column pair (v, conj v) by (sqrt2 Re v, sqrt2 Im v);
// real shifts keep one real column.
DenseMatrix realify_columns(const DenseMatrixC& columns, const std::vector<Complex>& shifts);

// Projector bases. V, W are the full (stacked) projectors; Vp, Vv, Wp, Wv the
// position/velocity blocks of a second-order reduction. Every stored basis
// has orthonormal columns. Unused members stay empty.
struct ProjectionPair {
  DenseMatrix V, W;
  DenseMatrix Vp, Vv, Wp, Wv;
};

}  // namespace morkit
