#include "morkit/projection.hpp"

#include <cmath>
#include <string>

#include "morkit/errors.hpp"

namespace morkit {

namespace {

constexpr double kRealTol = 1e-12;
constexpr double kPairTol = 1e-10;

bool is_real_shift(Complex a) { return std::abs(a.imag()) <= kRealTol * std::abs(a); }

}  // namespace

std::vector<Index> conjugate_partners(const std::vector<Complex>& shifts) {
  const Index r = static_cast<Index>(shifts.size());
  std::vector<Index> partner(r, -1);
  std::vector<bool> used(r, false);
  for (Index i = 0; i < r; ++i) {
    if (used[i] || is_real_shift(shifts[i])) continue;
    for (Index j = 0; j < r; ++j) {
      if (j == i || used[j]) continue;
      if (std::abs(shifts[j] - std::conj(shifts[i])) <= kPairTol * std::abs(shifts[i])) {
        partner[i] = j;
        partner[j] = i;
        used[i] = used[j] = true;
        break;
      }
    }
    if (!used[i]) {
      throw Error(ErrorCode::InvalidArgument,
                  "shift " + format_complex(shifts[i]) + " has no conjugate partner");
    }
  }
  return partner;
}

DenseMatrix realify_columns(const DenseMatrixC& columns, const std::vector<Complex>& shifts) {
  const Index r = static_cast<Index>(shifts.size());
  if (columns.cols() != r) {
    throw Error(ErrorCode::DimensionMismatch, "one column per shift expected");
  }
  const std::vector<Index> partner = conjugate_partners(shifts);
  DenseMatrix out(columns.rows(), r);
  const double s2 = std::sqrt(2.0);
  Index k = 0;
  for (Index i = 0; i < r; ++i) {
    if (partner[i] < 0) {
      const auto& v = columns.col(i);
      if (v.imag().norm() > v.real().norm()) {
        out.col(k++) = v.imag();
      } else {
        out.col(k++) = v.real();
      }
    } else if (partner[i] > i) {
      out.col(k++) = s2 * columns.col(i).real();
      out.col(k++) = s2 * columns.col(i).imag();
    }
  }
  return out;
}

void ShiftSet::validate(Index inputs, Index outputs) const {
  const Index r = size();
  if (static_cast<Index>(left_shifts.size()) != r || right_dirs.rows() != inputs ||
      right_dirs.cols() != r || left_dirs.rows() != outputs || left_dirs.cols() != r) {
    throw Error(ErrorCode::DimensionMismatch, "shift set sizes do not match the system");
  }
  for (Index i = 0; i < r; ++i) {
    if (!(shifts[i].real() > 0.0) || !(left_shifts[i].real() > 0.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "shift " + format_complex(shifts[i]) + " must have positive real part");
    }
  }
  const std::vector<Index> right_partner = conjugate_partners(shifts);
  conjugate_partners(left_shifts);
  for (Index i = 0; i < r; ++i) {
    const Index j = right_partner[i];
    if (j < 0) continue;
    const double tol = 1e-10 * (1.0 + right_dirs.col(i).norm() + left_dirs.col(i).norm());
    if ((right_dirs.col(j) - right_dirs.col(i).conjugate()).norm() > tol ||
        (left_dirs.col(j) - left_dirs.col(i).conjugate()).norm() > tol) {
      throw Error(ErrorCode::InvalidArgument,
                  "directions of conjugate shifts must be conjugate");
    }
  }
}

ShiftSet make_shift_set(std::vector<Complex> shifts, DenseMatrixC right_dirs, DenseMatrixC left_dirs) {
  ShiftSet s;
  s.left_shifts = shifts;
  s.shifts = std::move(shifts);
  s.right_dirs = std::move(right_dirs);
  s.left_dirs = std::move(left_dirs);
  return s;
}

ShiftSet make_siso_shift_set(std::vector<Complex> shifts) {
  const Index r = static_cast<Index>(shifts.size());
  return make_shift_set(std::move(shifts), DenseMatrixC::Ones(1, r), DenseMatrixC::Ones(1, r));
}

}  // namespace morkit
