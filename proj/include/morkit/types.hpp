#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace morkit {

using Index = Eigen::Index;
using Complex = std::complex<double>;

using SparseMatrix = Eigen::SparseMatrix<double>;
using SparseMatrixC = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::MatrixXd;
using DenseMatrixC = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using VectorC = Eigen::VectorXcd;
using Triplet = Eigen::Triplet<double>;

}  // namespace morkit
