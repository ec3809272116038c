#include "morkit/sysmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "morkit/numkernel.hpp"

namespace morkit {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::DimensionMismatch, message);
}

DenseMatrixC dense_resolvent_apply(const DenseMatrixC& pencil, const DenseMatrix& rhs, Complex s) {
  Eigen::PartialPivLU<DenseMatrixC> lu(pencil);
  if (!(lu.rcond() > 1e-14)) {
    throw Error(ErrorCode::ShiftOnSpectrum, "resolvent is singular at s = " + format_complex(s));
  }
  return lu.solve(rhs.cast<Complex>());
}

StabilityInfo stability_from(const VectorC& eigenvalues) {
  StabilityInfo info;
  info.abscissa = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    info.abscissa = std::max(info.abscissa, eigenvalues(i).real());
  }
  info.stable = info.abscissa < 0.0;
  return info;
}

}  // namespace

const char* to_string(Level level) { return level == Level::Position ? "position" : "velocity"; }

void SecondOrderSystem::validate() const {
  const Index n = M.rows();
  require(M.cols() == n, "M must be square");
  require(D.rows() == n && D.cols() == n, "D must be n x n");
  require(K.rows() == n && K.cols() == n, "K must be n x n");
  require(H.rows() == n, "H must have n rows");
  require(L.cols() == n, "L must have n columns");
}

void FirstOrderSystem::validate() const {
  const Index k = E.rows();
  require(E.cols() == k, "E must be square");
  require(A.rows() == k && A.cols() == k, "A must be k x k");
  require(B.rows() == k, "B must have k rows");
  require(C.cols() == k, "C must have k columns");
  require(Da.rows() == C.rows() && Da.cols() == B.cols(), "Da must be m x p");
}

void ReducedSecondOrderSystem::validate() const {
  const Index r = M.rows();
  require(M.cols() == r, "Mhat must be square");
  require(D.rows() == r && D.cols() == r, "Dhat must be r x r");
  require(K.rows() == r && K.cols() == r, "Khat must be r x r");
  require(H.rows() == r, "Hhat must have r rows");
  require(L.cols() == r, "Lhat must have r columns");
}

void ReducedFirstOrderSystem::validate() const {
  const Index r = E.rows();
  require(E.cols() == r, "Ehat must be square");
  require(A.rows() == r && A.cols() == r, "Ahat must be r x r");
  require(B.rows() == r, "Bhat must have r rows");
  require(C.cols() == r, "Chat must have r columns");
  require(Da.rows() == C.rows() && Da.cols() == B.cols(), "Dahat must be m x p");
}

FrequencyGrid::FrequencyGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorCode::InvalidArgument, "frequency grid is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double w = points_[i];
    if (!std::isfinite(w) || w <= 0.0) {
      throw Error(ErrorCode::InvalidArgument, "frequency grid points must be positive and finite");
    }
    if (i > 0 && !(w > points_[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "frequency grid must be strictly increasing");
    }
  }
}

FrequencyGrid FrequencyGrid::logspace(double lo, double hi, std::size_t count) {
  if (count == 0 || !(lo > 0.0) || !(hi >= lo)) {
    throw Error(ErrorCode::InvalidArgument, "logspace needs 0 < lo <= hi and count >= 1");
  }
  if (count > 1 && hi == lo) {
    throw Error(ErrorCode::InvalidArgument, "logspace with equal ends needs count = 1");
  }
  std::vector<double> pts(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    pts[i] = count == 1 ? lo : std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  if (count > 1) {
    pts.front() = lo;
    pts.back() = hi;
  }
  return FrequencyGrid(std::move(pts));
}

FrequencyGrid FrequencyGrid::default_grid() { return logspace(1e-2, 1e4, 200); }

FirstOrderSystem linearize(const SecondOrderSystem& sos) {
  sos.validate();
  const Index n = sos.n();
  std::vector<Triplet> e, a;
  e.reserve(static_cast<std::size_t>(n + sos.M.nonZeros()));
  a.reserve(static_cast<std::size_t>(n + sos.K.nonZeros() + sos.D.nonZeros()));
  for (Index i = 0; i < n; ++i) {
    e.emplace_back(i, i, 1.0);
    a.emplace_back(i, n + i, 1.0);
  }
  for (Index j = 0; j < n; ++j) {
    for (SparseMatrix::InnerIterator it(sos.M, j); it; ++it) e.emplace_back(n + it.row(), n + j, it.value());
    for (SparseMatrix::InnerIterator it(sos.K, j); it; ++it) a.emplace_back(n + it.row(), j, -it.value());
    for (SparseMatrix::InnerIterator it(sos.D, j); it; ++it) a.emplace_back(n + it.row(), n + j, -it.value());
  }
  FirstOrderSystem fo;
  fo.E.resize(2 * n, 2 * n);
  fo.E.setFromTriplets(e.begin(), e.end());
  fo.A.resize(2 * n, 2 * n);
  fo.A.setFromTriplets(a.begin(), a.end());
  fo.B = DenseMatrix::Zero(2 * n, sos.inputs());
  fo.B.bottomRows(n) = sos.H;
  fo.C = DenseMatrix::Zero(sos.outputs(), 2 * n);
  fo.C.leftCols(n) = sos.L;
  fo.Da = DenseMatrix::Zero(sos.outputs(), sos.inputs());
  return fo;
}

ReducedFirstOrderSystem linearize(const ReducedSecondOrderSystem& rom) {
  rom.validate();
  const Index r = rom.n();
  ReducedFirstOrderSystem fo;
  fo.E = DenseMatrix::Zero(2 * r, 2 * r);
  fo.E.topLeftCorner(r, r).setIdentity();
  fo.E.bottomRightCorner(r, r) = rom.M;
  fo.A = DenseMatrix::Zero(2 * r, 2 * r);
  fo.A.topRightCorner(r, r).setIdentity();
  fo.A.bottomLeftCorner(r, r) = -rom.K;
  fo.A.bottomRightCorner(r, r) = -rom.D;
  fo.B = DenseMatrix::Zero(2 * r, rom.inputs());
  fo.B.bottomRows(r) = rom.H;
  fo.C = DenseMatrix::Zero(rom.outputs(), 2 * r);
  fo.C.leftCols(r) = rom.L;
  fo.Da = DenseMatrix::Zero(rom.outputs(), rom.inputs());
  return fo;
}

ReducedFirstOrderSystem to_dense(const FirstOrderSystem& fo) {
  fo.validate();
  return {DenseMatrix(fo.E), DenseMatrix(fo.A), fo.B, fo.C, fo.Da};
}

ReducedSecondOrderSystem to_dense(const SecondOrderSystem& sos) {
  sos.validate();
  return {Level::Position, DenseMatrix(sos.M), DenseMatrix(sos.D), DenseMatrix(sos.K), sos.H, sos.L};
}

DenseMatrixC tf_eval(const SecondOrderSystem& sys, Complex s) {
  sys.validate();
  const Factorization f = assemble_quadratic_pencil(sys.M, sys.D, sys.K, s);
  return sys.L.cast<Complex>() * f.solve(sys.H.cast<Complex>());
}

DenseMatrixC tf_eval(const FirstOrderSystem& sys, Complex s) {
  sys.validate();
  const Factorization f = assemble_linear_pencil(sys.E, sys.A, s);
  return sys.C.cast<Complex>() * f.solve(sys.B.cast<Complex>()) + sys.Da.cast<Complex>();
}

DenseMatrixC tf_eval(const ReducedSecondOrderSystem& sys, Complex s) {
  sys.validate();
  const DenseMatrixC pencil = (s * s) * sys.M.cast<Complex>() + s * sys.D.cast<Complex>() + sys.K.cast<Complex>();
  if (sys.n() == 0) return DenseMatrixC::Zero(sys.outputs(), sys.inputs());
  return sys.L.cast<Complex>() * dense_resolvent_apply(pencil, sys.H, s);
}

DenseMatrixC tf_eval(const ReducedFirstOrderSystem& sys, Complex s) {
  sys.validate();
  if (sys.n() == 0) return sys.Da.cast<Complex>();
  const DenseMatrixC pencil = s * sys.E.cast<Complex>() - sys.A.cast<Complex>();
  return sys.C.cast<Complex>() * dense_resolvent_apply(pencil, sys.B, s) + sys.Da.cast<Complex>();
}

double sigma_max(const DenseMatrixC& g) {
  if (g.size() == 0) return 0.0;
  if (g.size() == 1) return std::abs(g(0, 0));
  return Eigen::JacobiSVD<DenseMatrixC>(g).singularValues()(0);
}

StabilityInfo is_stable(const ReducedSecondOrderSystem& sys, const DenseLimits& limits) {
  return is_stable(linearize(sys), limits);
}

StabilityInfo is_stable(const ReducedFirstOrderSystem& sys, const DenseLimits& limits) {
  sys.validate();
  if (sys.n() > limits.small_dense) {
    throw Error(ErrorCode::OversizeProblem, "pencil of order " + std::to_string(sys.n()) +
                                                " exceeds the small-dense limit");
  }
  return stability_from(generalized_eigenvalues(sys.A, sys.E));
}

StabilityInfo is_stable(const FirstOrderSystem& sys, bool allow_full, const DenseLimits& limits) {
  sys.validate();
  if (sys.n() > limits.small_dense && !allow_full) {
    throw Error(ErrorCode::OversizeProblem,
                "dense stability check of a full model of order " + std::to_string(sys.n()) +
                    " needs explicit opt-in");
  }
  if (sys.n() > limits.dense_gramian) {
    throw Error(ErrorCode::OversizeProblem, "pencil of order " + std::to_string(sys.n()) +
                                                " exceeds the dense limit");
  }
  return stability_from(generalized_eigenvalues(DenseMatrix(sys.A), DenseMatrix(sys.E)));
}

StabilityInfo is_stable(const SecondOrderSystem& sys, bool allow_full, const DenseLimits& limits) {
  return is_stable(linearize(sys), allow_full, limits);
}

std::string sigma_csv(const std::vector<SigmaPoint>& points) {
  std::string out = "omega,sigma\n";
  char buf[96];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.17e,%.17e\n", p.omega, p.sigma);
    out += buf;
  }
  return out;
}

std::string error_csv(const std::vector<ErrorPoint>& points) {
  std::string out = "omega,abs_err,rel_err\n";
  char buf[128];
  for (const auto& p : points) {
    if (p.rel_err) {
      std::snprintf(buf, sizeof buf, "%.17e,%.17e,%.17e\n", p.omega, p.abs_err, *p.rel_err);
    } else {
      std::snprintf(buf, sizeof buf, "%.17e,%.17e,\n", p.omega, p.abs_err);
    }
    out += buf;
  }
  return out;
}

}  // namespace morkit
