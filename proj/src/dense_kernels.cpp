#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "lapack.hpp"
#include "morkit/numkernel.hpp"

namespace morkit {

namespace {

constexpr double kSingularRcond = 1e-14;
constexpr double kIllConditioned = 1e8;

bool eig_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

double spectral_norm(const DenseMatrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::BDCSVD<DenseMatrix>(a).singularValues()(0);
}

Eigen::PartialPivLU<DenseMatrix> factor_nonsingular(const DenseMatrix& E, const char* what) {
  Eigen::PartialPivLU<DenseMatrix> lu(E);
  if (!(lu.rcond() > kSingularRcond)) {
    throw Error(ErrorCode::SingularMatrix,
                std::string(what) + " is singular (rcond " + format_real(lu.rcond()) + ")");
  }
  return lu;
}

// Real QZ via dggev. Vectors are unpacked to complex form when requested.
struct QzResult {
  std::vector<double> alphar, alphai, beta;
  DenseMatrix vl, vr;
};

QzResult run_qz(const DenseMatrix& A, const DenseMatrix& E, bool vectors) {
  const Index n = A.rows();
  DenseMatrix a = A;
  DenseMatrix b = E;
  QzResult out;
  out.alphar.resize(n);
  out.alphai.resize(n);
  out.beta.resize(n);
  const char job = vectors ? 'V' : 'N';
  out.vl.resize(n, vectors ? n : 1);
  out.vr.resize(n, vectors ? n : 1);
  const lapack_int ln = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_dggev(LAPACK_COL_MAJOR, job, job, ln, a.data(), ln, b.data(), ln,
                                        out.alphar.data(), out.alphai.data(), out.beta.data(),
                                        out.vl.data(), ln, out.vr.data(), ln);
  if (info > 0) {
    throw Error(ErrorCode::NoConvergence,
                "QZ iteration failed (LAPACK dggev info = " + std::to_string(info) + " of " +
                    std::to_string(n) + ")");
  }
  if (info < 0) {
    throw Error(ErrorCode::InvalidArgument, "dggev argument " + std::to_string(-info));
  }
  return out;
}

DenseMatrixC unpack_vectors(const DenseMatrix& packed, const std::vector<double>& alphai) {
  const Index n = packed.rows();
  DenseMatrixC v(n, n);
  for (Index j = 0; j < n; ++j) {
    if (alphai[j] != 0.0 && j + 1 < n) {
      v.col(j) = packed.col(j).cast<Complex>() + Complex(0, 1) * packed.col(j + 1).cast<Complex>();
      v.col(j + 1) = v.col(j).conjugate();
      ++j;
    } else {
      v.col(j) = packed.col(j).cast<Complex>();
    }
  }
  return v;
}

void check_trsyl_info(lapack_int info) {
  if (info == 1) {
    throw Error(ErrorCode::LyapunovSingular, "pencil has eigenvalues with lambda_i + conj(lambda_j) ~ 0");
  }
  if (info != 0) throw Error(ErrorCode::InvalidArgument, "dtrsyl info = " + std::to_string(info));
}

// Block boundaries of size about nb that never split a 2x2 diagonal bump.
std::vector<Index> block_starts(const DenseMatrix& t, Index nb) {
  const Index n = t.rows();
  std::vector<Index> starts;
  Index k = 0;
  while (k < n) {
    starts.push_back(k);
    k = std::min(n, k + nb);
    if (k < n && t(k, k - 1) != 0.0) ++k;
  }
  starts.push_back(n);
  return starts;
}

// Solves T X + X T^T = C in place for upper quasi-triangular T (real Schur
// form). Blocked so that most work runs as matrix products; each diagonal
// block pair goes through dtrsyl. Returns the dtrsyl scale factor.
double solve_triangular_lyapunov(const DenseMatrix& t, DenseMatrix& c) {
  const Index n = t.rows();
  constexpr Index kBlock = 64;
  if (n <= 2 * kBlock) {
    double scale = 1.0;
    const lapack_int ln = static_cast<lapack_int>(n);
    check_trsyl_info(LAPACKE_dtrsyl(LAPACK_COL_MAJOR, 'N', 'T', 1, ln, ln, t.data(), ln, t.data(), ln,
                                    c.data(), ln, &scale));
    return scale;
  }
  const std::vector<Index> b = block_starts(t, kBlock);
  const Index nblocks = static_cast<Index>(b.size()) - 1;
  for (Index i = nblocks - 1; i >= 0; --i) {
    const Index ri = b[i];
    const Index ni = b[i + 1] - ri;
    const Index tail = n - (ri + ni);
    if (tail > 0) c.middleRows(ri, ni).noalias() -= t.block(ri, ri + ni, ni, tail) * c.bottomRows(tail);
    DenseMatrix tii = t.block(ri, ri, ni, ni);
    for (Index j = nblocks - 1; j >= 0; --j) {
      const Index rj = b[j];
      const Index nj = b[j + 1] - rj;
      const Index right = n - (rj + nj);
      DenseMatrix rhs = c.block(ri, rj, ni, nj);
      if (right > 0) {
        rhs.noalias() -= c.block(ri, rj + nj, ni, right) * t.block(rj, rj + nj, nj, right).transpose();
      }
      DenseMatrix tjj = t.block(rj, rj, nj, nj);
      double scale = 1.0;
      check_trsyl_info(LAPACKE_dtrsyl(LAPACK_COL_MAJOR, 'N', 'T', 1, static_cast<lapack_int>(ni),
                                      static_cast<lapack_int>(nj), tii.data(), static_cast<lapack_int>(ni),
                                      tjj.data(), static_cast<lapack_int>(nj), rhs.data(),
                                      static_cast<lapack_int>(ni), &scale));
      if (scale != 1.0) {
        throw Error(ErrorCode::LyapunovSingular, "Lyapunov solution needed overflow scaling");
      }
      c.block(ri, rj, ni, nj) = rhs;
    }
  }
  return 1.0;
}

// Bartels-Stewart on the E-transformed equation At X + X At^T + Ft = 0,
// with At = E^{-1} A = U T U^T (real Schur).
class LyapunovSchur {
 public:
  LyapunovSchur(const DenseMatrix& A, const DenseMatrix& E) : lu_(factor_nonsingular(E, "E")) {
    const Index n = A.rows();
    t_ = lu_.solve(A);
    u_.resize(n, n);
    std::vector<double> wr(n), wi(n);
    lapack_int sdim = 0;
    const lapack_int ln = static_cast<lapack_int>(n);
    const lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, ln, t_.data(), ln,
                                          &sdim, wr.data(), wi.data(), u_.data(), ln);
    if (info != 0) {
      throw Error(ErrorCode::NoConvergence,
                  "real Schur decomposition failed (LAPACK dgees info = " + std::to_string(info) + ")");
    }
    spectrum_.resize(n);
    for (Index i = 0; i < n; ++i) spectrum_(i) = Complex(wr[i], wi[i]);
  }

  const VectorC& spectrum() const { return spectrum_; }

  // Returns X with A X E^T + E X A^T + G = 0.
  DenseMatrix solve(const DenseMatrix& G) const {
    const Index n = t_.rows();
    const DenseMatrix einv_g = lu_.solve(G);
    const DenseMatrix gt = lu_.solve(einv_g.transpose()).transpose();
    DenseMatrix c = u_.transpose() * gt * u_;
    const double scale = solve_triangular_lyapunov(t_, c);
    return u_ * (-c / scale) * u_.transpose();
  }

 private:
  Eigen::PartialPivLU<DenseMatrix> lu_;
  DenseMatrix t_;
  DenseMatrix u_;
  VectorC spectrum_;
};

}  // namespace

EigenTriplets generalized_eig_small(const DenseMatrix& Ahat, const DenseMatrix& Ehat,
                                    const DenseLimits& limits) {
  const Index r = Ahat.rows();
  if (Ahat.cols() != r || Ehat.rows() != r || Ehat.cols() != r) {
    throw Error(ErrorCode::DimensionMismatch, "generalized_eig_small needs square pencils of equal size");
  }
  if (r > limits.small_dense) {
    throw Error(ErrorCode::OversizeProblem, "pencil of order " + std::to_string(r) +
                                                " exceeds the small-dense limit " +
                                                std::to_string(limits.small_dense));
  }
  EigenTriplets out;
  if (r == 0) return out;
  factor_nonsingular(Ehat, "Ehat");

  const QzResult qz = run_qz(Ahat, Ehat, true);
  VectorC values(r);
  for (Index j = 0; j < r; ++j) {
    if (qz.beta[j] == 0.0) {
      throw Error(ErrorCode::SingularMatrix, "pencil has an infinite eigenvalue");
    }
    values(j) = Complex(qz.alphar[j], qz.alphai[j]) / qz.beta[j];
    if (qz.alphai[j] != 0.0 && j + 1 < r) {
      values(j + 1) = std::conj(values(j));
      ++j;
    }
  }
  DenseMatrixC right = unpack_vectors(qz.vr, qz.alphai);
  DenseMatrixC left = unpack_vectors(qz.vl, qz.alphai);

  std::vector<Index> order(r);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return eig_less(values(a), values(b)); });

  const DenseMatrixC ehat_c = Ehat.cast<Complex>();
  out.values.resize(r);
  out.right.resize(r, r);
  out.left.resize(r, r);
  for (Index k = 0; k < r; ++k) {
    const Index j = order[k];
    out.values(k) = values(j);
    out.right.col(k) = right.col(j).normalized();
    out.left.col(k) = left.col(j).normalized();
    const double denom = std::abs(out.left.col(k).dot(ehat_c * out.right.col(k)));
    const double kappa = denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();
    out.max_condition = std::max(out.max_condition, kappa);
  }
  out.ill_conditioned = out.max_condition > kIllConditioned;
  return out;
}

VectorC generalized_eigenvalues(const DenseMatrix& A, const DenseMatrix& E) {
  const Index n = A.rows();
  if (A.cols() != n || E.rows() != n || E.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "generalized_eigenvalues needs square pencils of equal size");
  }
  if (n == 0) return VectorC(0);
  const QzResult qz = run_qz(A, E, false);
  std::vector<Complex> finite;
  const double bnorm = E.cwiseAbs().maxCoeff();
  for (Index j = 0; j < n; ++j) {
    const bool pair = qz.alphai[j] != 0.0 && j + 1 < n;
    if (std::abs(qz.beta[j]) > std::numeric_limits<double>::epsilon() * bnorm * n) {
      const Complex lambda(qz.alphar[j] / qz.beta[j], qz.alphai[j] / qz.beta[j]);
      finite.push_back(lambda);
      if (pair) finite.push_back(std::conj(lambda));
    }
    if (pair) ++j;
  }
  std::stable_sort(finite.begin(), finite.end(), eig_less);
  return Eigen::Map<VectorC>(finite.data(), static_cast<Index>(finite.size()));
}

double eig_residual(const DenseMatrix& Ahat, const DenseMatrix& Ehat, const EigenTriplets& eig) {
  const DenseMatrixC a = Ahat.cast<Complex>();
  const DenseMatrixC e = Ehat.cast<Complex>();
  const double na = spectral_norm(Ahat);
  const double ne = spectral_norm(Ehat);
  double worst = 0.0;
  for (Index i = 0; i < eig.values.size(); ++i) {
    const Complex lambda = eig.values(i);
    const double scale = na + std::abs(lambda) * ne;
    const double right = (a * eig.right.col(i) - lambda * (e * eig.right.col(i))).norm();
    const double left =
        (eig.left.col(i).adjoint() * a - lambda * (eig.left.col(i).adjoint() * e)).norm();
    worst = std::max({worst, right / scale, left / scale});
  }
  return worst;
}

DenseMatrix lyap_dense(const DenseMatrix& A, const DenseMatrix& E, const DenseMatrix& F,
                       const DenseLimits& limits) {
  return lyap_dense_solve(A, E, F, limits).X;
}

LyapunovSolution lyap_dense_solve(const DenseMatrix& A, const DenseMatrix& E, const DenseMatrix& F,
                                  const DenseLimits& limits) {
  const Index n = A.rows();
  if (A.cols() != n || E.rows() != n || E.cols() != n || F.rows() != n || F.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "lyap_dense needs square A, E, F of equal size");
  }
  if (n > limits.dense_gramian) {
    throw Error(ErrorCode::OversizeProblem,
                "dense Lyapunov solve of order " + std::to_string(n) + " exceeds the limit " +
                    std::to_string(limits.dense_gramian) +
                    "; use h2_norm_quadrature or raise MORKIT_DENSE_LIMIT");
  }
  if (n == 0) return {DenseMatrix(0, 0), VectorC(0), 0.0};

  const LyapunovSchur schur(A, E);
  DenseMatrix X = schur.solve(F);

  // Up to two steps of residual correction, kept only while they help.
  double res = lyap_residual(A, E, F, X);
  for (int step = 0; step < 2 && res > 1e-11; ++step) {
    const DenseMatrix R = A * X * E.transpose() + E * X * A.transpose() + F;
    const DenseMatrix candidate = X + schur.solve(R);
    const double cres = lyap_residual(A, E, F, candidate);
    if (!(cres < res)) break;
    X = candidate;
    res = cres;
  }

  const double fnorm = F.norm();
  if ((F - F.transpose()).norm() <= 1e-14 * fnorm) {
    X = 0.5 * (X + X.transpose()).eval();
    res = lyap_residual(A, E, F, X);
  }
  return {std::move(X), schur.spectrum(), res};
}

double lyap_residual(const DenseMatrix& A, const DenseMatrix& E, const DenseMatrix& F,
                     const DenseMatrix& X) {
  const DenseMatrix AX = A * X;
  const DenseMatrix EX = E * X;
  const double r = (AX * E.transpose() + EX * A.transpose() + F).norm();
  const double f = F.norm();
  return f > 0.0 ? r / f : r;
}

DenseMatrix orthonormal_basis(const DenseMatrix& X, const std::string& what) {
  const Index k = X.cols();
  if (k == 0) return DenseMatrix(X.rows(), 0);
  DenseMatrix scaled = X;
  for (Index j = 0; j < k; ++j) {
    const double nj = scaled.col(j).norm();
    if (nj > 0.0) scaled.col(j) /= nj;
  }
  Eigen::ColPivHouseholderQR<DenseMatrix> qr;
  qr.setThreshold(1e-13);
  qr.compute(scaled);
  if (qr.rank() < k) {
    throw Error(ErrorCode::RankDeficient, what + " has numerical rank " + std::to_string(qr.rank()) +
                                              " < " + std::to_string(k));
  }
  DenseMatrix Q = qr.householderQ() * DenseMatrix::Identity(X.rows(), k);
  return Q;
}

}  // namespace morkit
