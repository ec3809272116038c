#include <cmath>

#include "morkit/numkernel.hpp"

namespace morkit {

namespace {

void require_finite(const DenseMatrixC& x, const std::string& what) {
  if (!x.allFinite()) {
    throw Error(ErrorCode::SingularMatrix, "non-finite solution from " + what);
  }
}

}  // namespace

SparseMatrixC to_complex(const SparseMatrix& a) { return a.cast<Complex>(); }

Factorization Factorization::factor(const SparseMatrixC& a, const std::string& what) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, what + " is not square");
  }
  Factorization f;
  f.dim_ = a.rows();
  f.what_ = what;
  if (a.rows() == 0) return f;

  auto lu = std::make_shared<Solver>();
  SparseMatrixC compressed = a;
  compressed.makeCompressed();
  lu->analyzePattern(compressed);
  lu->factorize(compressed);
  if (lu->info() != Eigen::Success) {
    throw Error(ErrorCode::ShiftOnSpectrum, what + " is singular (" + lu->lastErrorMessage() + ")");
  }
  f.lu_ = std::move(lu);
  return f;
}

DenseMatrixC Factorization::solve(const DenseMatrixC& rhs) const {
  if (rhs.rows() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "right-hand side rows do not match " + what_);
  }
  if (dim_ == 0) return DenseMatrixC(0, rhs.cols());
  DenseMatrixC x = lu_->solve(rhs);
  require_finite(x, what_);
  return x;
}

DenseMatrixC Factorization::solve_transposed(const DenseMatrixC& rhs) const {
  if (rhs.rows() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "right-hand side rows do not match " + what_);
  }
  if (dim_ == 0) return DenseMatrixC(0, rhs.cols());
  DenseMatrixC x = lu_->transpose().solve(rhs);
  require_finite(x, what_);
  return x;
}

Factorization assemble_quadratic_pencil(const SparseMatrix& M, const SparseMatrix& D,
                                        const SparseMatrix& K, Complex alpha) {
  const Index n = M.rows();
  if (M.cols() != n || D.rows() != n || D.cols() != n || K.rows() != n || K.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "M, D, K must be square of equal size");
  }
  const SparseMatrixC pencil =
      (alpha * alpha) * to_complex(M) + alpha * to_complex(D) + to_complex(K);
  return Factorization::factor(pencil, "quadratic pencil at alpha = " + format_complex(alpha));
}

Factorization assemble_linear_pencil(const SparseMatrix& E, const SparseMatrix& A, Complex s) {
  if (E.rows() != E.cols() || A.rows() != A.cols() || E.rows() != A.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "E and A must be square of equal size");
  }
  const SparseMatrixC pencil = s * to_complex(E) - to_complex(A);
  return Factorization::factor(pencil, "pencil sE - A at s = " + format_complex(s));
}

}  // namespace morkit
