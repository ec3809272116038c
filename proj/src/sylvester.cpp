#include <optional>
#include <vector>

#include "morkit/numkernel.hpp"

namespace morkit {

namespace {

// Diagonalizes the small pencil once and keeps one sparse factorization of
// A + lambda_i E per eigenvalue. A conjugate partner reuses its twin's solve.
class SparseDenseSylvester {
 public:
  SparseDenseSylvester(const SparseMatrix& A, const SparseMatrix& E, const DenseMatrix& Ahat,
                       const DenseMatrix& Ehat, const DenseLimits& limits)
      : eig_(generalized_eig_small(Ahat, Ehat, limits)) {
    const Index r = Ahat.rows();
    // Ahat^T conj(y_i) = lambda_i Ehat^T conj(y_i)
    g_ = eig_.left.conjugate();
    const DenseMatrixC t = Ehat.cast<Complex>().transpose() * g_;
    t_lu_ = Eigen::PartialPivLU<DenseMatrixC>(t.transpose());
    if (!(t_lu_.rcond() > 1e-13)) {
      throw Error(ErrorCode::SingularMatrix,
                  "reduced pencil is not diagonalizable to working accuracy");
    }

    const SparseMatrixC ac = to_complex(A);
    const SparseMatrixC ec = to_complex(E);
    factors_.resize(r);
    twin_.assign(r, -1);
    for (Index i = 0; i < r; ++i) {
      const Complex lambda = eig_.values(i);
      if (i > 0 && twin_[i - 1] < 0 && lambda.imag() != 0.0 && lambda == std::conj(eig_.values(i - 1)) &&
          g_.col(i) == g_.col(i - 1).conjugate()) {
        twin_[i] = i - 1;
        continue;
      }
      try {
        factors_[i] = Factorization::factor(ac + lambda * ec,
                                            "A + lambda E at lambda = " + format_complex(lambda));
      } catch (const Error& e) {
        throw Error(ErrorCode::ShiftOnSpectrum,
                    "-lambda = " + format_complex(-lambda) +
                        " of the reduced pencil is an eigenvalue of (A, E): " + e.message());
      }
    }
  }

  // Returns X with A X Ehat^T + E X Ahat^T + F = 0.
  DenseMatrix solve(const DenseMatrix& F) const {
    const Index r = g_.cols();
    const DenseMatrixC rhs = -(F.cast<Complex>() * g_);
    DenseMatrixC xt(F.rows(), r);
    for (Index i = 0; i < r; ++i) {
      if (twin_[i] >= 0) {
        xt.col(i) = xt.col(twin_[i]).conjugate();
      } else {
        xt.col(i) = factors_[i]->solve(rhs.col(i));
      }
    }
    // X (Ehat^T G) = Xt
    const DenseMatrixC x = t_lu_.solve(xt.transpose()).transpose();
    return x.real();
  }

 private:
  EigenTriplets eig_;
  DenseMatrixC g_;
  Eigen::PartialPivLU<DenseMatrixC> t_lu_;  // of (Ehat^T G)^T
  std::vector<std::optional<Factorization>> factors_;
  std::vector<Index> twin_;
};

void check_sylvester_dims(const SparseMatrix& A, const SparseMatrix& E, const DenseMatrix& Ahat,
                          const DenseMatrix& Ehat, const DenseMatrix& F) {
  const Index n = A.rows();
  const Index r = Ahat.rows();
  if (A.cols() != n || E.rows() != n || E.cols() != n || Ahat.cols() != r || Ehat.rows() != r ||
      Ehat.cols() != r || F.rows() != n || F.cols() != r) {
    throw Error(ErrorCode::DimensionMismatch, "sylvester_sparse_dense operand sizes are inconsistent");
  }
}

}  // namespace

DenseMatrix sylvester_sparse_dense(const SparseMatrix& A, const SparseMatrix& E,
                                   const DenseMatrix& Ahat, const DenseMatrix& Ehat,
                                   const DenseMatrix& F, const DenseLimits& limits) {
  check_sylvester_dims(A, E, Ahat, Ehat, F);
  const Index n = A.rows();
  const Index r = Ahat.rows();
  if (n == 0 || r == 0) return DenseMatrix::Zero(n, r);

  const SparseDenseSylvester solver(A, E, Ahat, Ehat, limits);
  DenseMatrix X = solver.solve(F);

  double res = sylvester_residual(A, E, Ahat, Ehat, F, X);
  for (int step = 0; step < 2 && res > 1e-14; ++step) {
    const DenseMatrix R = A * X * Ehat.transpose() + E * X * Ahat.transpose() + F;
    const DenseMatrix candidate = X + solver.solve(R);
    const double cres = sylvester_residual(A, E, Ahat, Ehat, F, candidate);
    if (!(cres < res)) break;
    X = candidate;
    res = cres;
  }
  return X;
}

DenseMatrix sylvester_sparse_dense(const SparseMatrix& A, const SparseMatrix& E,
                                   const DenseMatrix& Ahat, const DenseMatrix& Ehat,
                                   const DenseMatrix& B, const DenseMatrix& Bhat,
                                   const DenseLimits& limits) {
  if (B.cols() != Bhat.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "B and Bhat must have the same number of columns");
  }
  return sylvester_sparse_dense(A, E, Ahat, Ehat, DenseMatrix(B * Bhat.transpose()), limits);
}

double sylvester_residual(const SparseMatrix& A, const SparseMatrix& E, const DenseMatrix& Ahat,
                          const DenseMatrix& Ehat, const DenseMatrix& F, const DenseMatrix& X) {
  const DenseMatrix R = A * X * Ehat.transpose() + E * X * Ahat.transpose() + F;
  const double f = F.norm();
  return f > 0.0 ? R.norm() / f : R.norm();
}

}  // namespace morkit
