#pragma once

#include <memory>
#include <string>

#include <Eigen/SparseLU>

#include "morkit/config.hpp"
#include "morkit/errors.hpp"
#include "morkit/types.hpp"

namespace morkit {

// Sparse LU of a square complex matrix. Cheap to copy; copies share the
// factors, and concurrent solves on one factorization are safe.
class Factorization {
 public:
  using Solver = Eigen::SparseLU<SparseMatrixC, Eigen::COLAMDOrdering<int>>;

  Factorization() = default;

  Index dim() const { return dim_; }
  bool empty() const { return lu_ == nullptr; }

  // Solves A X = rhs.
  DenseMatrixC solve(const DenseMatrixC& rhs) const;
  // Solves A^T X = rhs (plain transpose, not adjoint).
  DenseMatrixC solve_transposed(const DenseMatrixC& rhs) const;

  // Factors `a`; `what` names the matrix in error messages.
  static Factorization factor(const SparseMatrixC& a, const std::string& what);

 private:
  std::shared_ptr<Solver> lu_;
  Index dim_ = 0;
  std::string what_;
};

// Factorization of alpha^2 M + alpha D + K.
Factorization assemble_quadratic_pencil(const SparseMatrix& M, const SparseMatrix& D,
                                        const SparseMatrix& K, Complex alpha);

// Factorization of s E - A.
Factorization assemble_linear_pencil(const SparseMatrix& E, const SparseMatrix& A, Complex s);

SparseMatrixC to_complex(const SparseMatrix& a);

// Eigen-triplets of a small dense pencil (Ahat, Ehat):
//   Ahat z_i = lambda_i Ehat z_i,  y_i^H Ahat = lambda_i y_i^H Ehat.
// Columns are unit 2-norm. Ordered by real part, then imaginary part.
struct EigenTriplets {
  VectorC values;
  DenseMatrixC right;
  DenseMatrixC left;
  // Largest eigenvalue condition number ||y|| ||z|| / |y^H Ehat z|.
  double max_condition = 1.0;
  // Set when max_condition exceeds 1e8 (defective or nearly defective pencil).
  bool ill_conditioned = false;
};

EigenTriplets generalized_eig_small(const DenseMatrix& Ahat, const DenseMatrix& Ehat,
                                    const DenseLimits& limits = default_limits());

// Finite eigenvalues of the pencil (A, E), same ordering as above. No size guard.
VectorC generalized_eigenvalues(const DenseMatrix& A, const DenseMatrix& E);

// max_i ||Ahat z_i - lambda_i Ehat z_i|| / (||Ahat|| + |lambda_i| ||Ehat||), and the
// same for the left vectors.
double eig_residual(const DenseMatrix& Ahat, const DenseMatrix& Ehat, const EigenTriplets& eig);

// Solves A X E^T + E X A^T + F = 0 for dense A, E (E nonsingular).
DenseMatrix lyap_dense(const DenseMatrix& A, const DenseMatrix& E, const DenseMatrix& F,
                       const DenseLimits& limits = default_limits());

struct LyapunovSolution {
  DenseMatrix X;
  VectorC spectrum;  // eigenvalues of the pencil (A, E)
  double residual = 0.0;
};

// lyap_dense that also returns the pencil spectrum and the relative residual.
LyapunovSolution lyap_dense_solve(const DenseMatrix& A, const DenseMatrix& E, const DenseMatrix& F,
                                  const DenseLimits& limits = default_limits());

// ||A X E^T + E X A^T + F||_F / ||F||_F (absolute when F = 0).
double lyap_residual(const DenseMatrix& A, const DenseMatrix& E, const DenseMatrix& F,
                     const DenseMatrix& X);

// Solves A X Ehat^T + E X Ahat^T + B Bhat^T = 0 with A, E sparse n x n and
// Ahat, Ehat dense r x r.
DenseMatrix sylvester_sparse_dense(const SparseMatrix& A, const SparseMatrix& E,
                                   const DenseMatrix& Ahat, const DenseMatrix& Ehat,
                                   const DenseMatrix& B, const DenseMatrix& Bhat,
                                   const DenseLimits& limits = default_limits());

// Same equation with a general right-hand side F (n x r): A X Ehat^T + E X Ahat^T + F = 0.
DenseMatrix sylvester_sparse_dense(const SparseMatrix& A, const SparseMatrix& E,
                                   const DenseMatrix& Ahat, const DenseMatrix& Ehat,
                                   const DenseMatrix& F,
                                   const DenseLimits& limits = default_limits());

double sylvester_residual(const SparseMatrix& A, const SparseMatrix& E, const DenseMatrix& Ahat,
                          const DenseMatrix& Ehat, const DenseMatrix& F, const DenseMatrix& X);

// Orthonormal basis of range(X) by column-pivoted QR. Throws RankDeficient,
// naming `what`, when the numerical rank falls below X.cols().
DenseMatrix orthonormal_basis(const DenseMatrix& X, const std::string& what);

}  // namespace morkit
