#include "morkit/h2norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "morkit/numkernel.hpp"

namespace morkit {

namespace {

void check_residual(ResidualMap& map, const std::string& name, double value) {
  map[name] = value;
  if (!(value <= kGramianResidualTol)) {
    throw Error(ErrorCode::ResidualTooLarge, name + " equation residual " + format_real(value) +
                                                 " exceeds " + format_real(kGramianResidualTol));
  }
}

void check_psd(const DenseMatrix& X, const std::string& name) {
  if (X.rows() == 0) return;
  const Eigen::SelfAdjointEigenSolver<DenseMatrix> es(X, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo < -kGramianPsdTol * std::max(hi, 0.0)) {
    throw Error(ErrorCode::InconsistentGramians,
                name + " is not positive semidefinite (eigenvalue " + format_real(lo) + ", largest " +
                    format_real(hi) + ")");
  }
}

void require_stable_spectrum(const VectorC& spectrum, const std::string& what) {
  double abscissa = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < spectrum.size(); ++i) abscissa = std::max(abscissa, spectrum(i).real());
  if (spectrum.size() > 0 && !(abscissa < 0.0)) {
    throw Error(ErrorCode::Unstable, what + " is not asymptotically stable (spectral abscissa " +
                                         format_real(abscissa) + "); its H2 norm is undefined");
  }
}

void check_pair(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom) {
  fo.validate();
  rom.validate();
  if (fo.inputs() != rom.inputs() || fo.outputs() != rom.outputs()) {
    throw Error(ErrorCode::DimensionMismatch, "full and reduced models differ in inputs or outputs");
  }
}

double trace_of_product(const DenseMatrix& a, const DenseMatrix& b) {
  // tr(a b) without forming the product.
  return a.cwiseProduct(b.transpose()).sum();
}

}  // namespace

ErrorSystem build_error_system(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom) {
  check_pair(fo, rom);
  return {fo, rom};
}

DenseMatrixC tf_eval(const ErrorSystem& sys, Complex s) { return tf_eval(sys.full, s) - tf_eval(sys.rom, s); }

FullGramians solve_full_gramians(const FirstOrderSystem& fo, const DenseLimits& limits) {
  fo.validate();
  if (fo.n() > limits.dense_gramian) {
    throw Error(ErrorCode::OversizeProblem,
                "full Gramians of order " + std::to_string(fo.n()) + " exceed the dense limit " +
                    std::to_string(limits.dense_gramian) +
                    "; use h2_norm_quadrature or raise MORKIT_DENSE_LIMIT");
  }
  const DenseMatrix A(fo.A);
  const DenseMatrix E(fo.E);
  FullGramians out;
  LyapunovSolution p = lyap_dense_solve(A, E, fo.B * fo.B.transpose(), limits);
  require_stable_spectrum(p.spectrum, "full model");
  check_residual(out.residuals, "P11", p.residual);
  LyapunovSolution q = lyap_dense_solve(A.transpose(), E.transpose(), fo.C.transpose() * fo.C, limits);
  check_residual(out.residuals, "Q11", q.residual);
  check_psd(p.X, "P11");
  check_psd(q.X, "Q11");
  out.P11 = std::move(p.X);
  out.Q11 = std::move(q.X);
  return out;
}

GramianBlocks solve_gramian_blocks(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom,
                                   const DenseLimits& limits) {
  check_pair(fo, rom);
  return solve_gramian_blocks(fo, rom, solve_full_gramians(fo, limits), limits);
}

GramianBlocks solve_gramian_blocks(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom,
                                   const FullGramians& full, const DenseLimits& limits) {
  check_pair(fo, rom);
  if (full.P11.rows() != fo.n() || full.Q11.rows() != fo.n()) {
    throw Error(ErrorCode::DimensionMismatch, "cached full Gramians do not match the model");
  }
  GramianBlocks gb;
  gb.P11 = full.P11;
  gb.Q11 = full.Q11;
  gb.residuals = full.residuals;

  LyapunovSolution p22 = lyap_dense_solve(rom.A, rom.E, rom.B * rom.B.transpose(), limits);
  require_stable_spectrum(p22.spectrum, "reduced model");
  check_residual(gb.residuals, "P22", p22.residual);
  LyapunovSolution q22 = lyap_dense_solve(rom.A.transpose(), rom.E.transpose(), rom.C.transpose() * rom.C, limits);
  check_residual(gb.residuals, "Q22", q22.residual);
  check_psd(p22.X, "P22");
  check_psd(q22.X, "Q22");
  gb.P22 = std::move(p22.X);
  gb.Q22 = std::move(q22.X);

  gb.P12 = sylvester_sparse_dense(fo.A, fo.E, rom.A, rom.E, fo.B, rom.B, limits);
  check_residual(gb.residuals, "P12",
                 sylvester_residual(fo.A, fo.E, rom.A, rom.E, fo.B * rom.B.transpose(), gb.P12));

  const SparseMatrix At = fo.A.transpose();
  const SparseMatrix Et = fo.E.transpose();
  const DenseMatrix Aht = rom.A.transpose();
  const DenseMatrix Eht = rom.E.transpose();
  const DenseMatrix F = -(fo.C.transpose() * rom.C);
  gb.Q12 = sylvester_sparse_dense(At, Et, Aht, Eht, F, limits);
  check_residual(gb.residuals, "Q12", sylvester_residual(At, Et, Aht, Eht, F, gb.Q12));
  return gb;
}

double clamped_sqrt(double total, double leading) {
  if (total >= 0.0) return std::sqrt(total);
  if (total >= -1e-12 * std::abs(leading)) return 0.0;
  throw Error(ErrorCode::InconsistentGramians,
              "squared H2 error " + format_real(total) + " is negative beyond rounding (leading term " +
                  format_real(leading) + ")");
}

double h2_error_from_P(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom, const GramianBlocks& gb) {
  check_pair(fo, rom);
  const double t11 = trace_of_product(fo.C * gb.P11, fo.C.transpose());
  const double t22 = trace_of_product(rom.C * gb.P22, rom.C.transpose());
  const double t12 = trace_of_product(fo.C * gb.P12, rom.C.transpose());
  return clamped_sqrt(t11 + t22 - 2.0 * t12, std::max({std::abs(t11), std::abs(t22), 2.0 * std::abs(t12)}));
}

double h2_error_from_Q(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom, const GramianBlocks& gb) {
  check_pair(fo, rom);
  const double t11 = trace_of_product(fo.B.transpose() * gb.Q11, fo.B);
  const double t22 = trace_of_product(rom.B.transpose() * gb.Q22, rom.B);
  const double t12 = trace_of_product(fo.B.transpose() * gb.Q12, rom.B);
  return clamped_sqrt(t11 + t22 + 2.0 * t12, std::max({std::abs(t11), std::abs(t22), 2.0 * std::abs(t12)}));
}

DenseMatrix semidefinite_factor(const DenseMatrix& X) {
  const Index n = X.rows();
  if (n == 0) return DenseMatrix(0, 0);
  const Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (X + X.transpose()));
  const Eigen::VectorXd& w = es.eigenvalues();
  const double top = w.maxCoeff();
  if (!(top > 0.0)) return DenseMatrix::Zero(n, 0);
  Index keep = 0;
  for (Index i = 0; i < n; ++i) keep += w(i) > 1e-12 * top ? 1 : 0;
  DenseMatrix Z(n, keep);
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    if (w(i) > 1e-12 * top) Z.col(k++) = es.eigenvectors().col(i) * std::sqrt(w(i));
  }
  return Z;
}

H2NormResult h2_norm_full(const FirstOrderSystem& fo, const DenseLimits& limits) {
  return h2_norm_full(fo, solve_full_gramians(fo, limits));
}

H2NormResult h2_norm_full(const FirstOrderSystem& fo, const FullGramians& full) {
  fo.validate();
  H2NormResult out;
  out.factors.Zp = semidefinite_factor(full.P11);
  out.factors.Zq = semidefinite_factor(full.Q11);
  out.norm = (fo.C * out.factors.Zp).norm();
  out.norm_dual = (fo.B.transpose() * out.factors.Zq).norm();
  out.residuals = full.residuals;
  const double scale = std::max(out.norm, out.norm_dual);
  if (std::abs(out.norm - out.norm_dual) > 1e-6 * scale) {
    throw Error(ErrorCode::InconsistentGramians,
                "controllability and observability norms disagree: " + format_real(out.norm) + " vs " +
                    format_real(out.norm_dual));
  }
  return out;
}

double h2_norm(const ReducedFirstOrderSystem& rom, const DenseLimits& limits) {
  rom.validate();
  const LyapunovSolution p = lyap_dense_solve(rom.A, rom.E, rom.B * rom.B.transpose(), limits);
  require_stable_spectrum(p.spectrum, "reduced model");
  ResidualMap unused;
  check_residual(unused, "P22", p.residual);
  const double t = trace_of_product(rom.C * p.X, rom.C.transpose());
  return clamped_sqrt(t, t);
}

namespace detail {

void check_quadrature_tails(double f_first, double f_last, double peak, double integral, double omega_first) {
  if (f_last > 1e-12 * peak) {
    throw Error(ErrorCode::GridTooNarrow,
                "integrand at the upper end is " + format_real(f_last / peak) +
                    " of its peak (needs <= 1e-12)");
  }
  if (f_first * omega_first > 1e-3 * integral) {
    throw Error(ErrorCode::GridTooNarrow,
                "the interval below the first point carries more than 1e-3 of the integral");
  }
}

}  // namespace detail

NormReport norm_report(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom, const DenseLimits& limits) {
  check_pair(fo, rom);
  return norm_report(fo, rom, solve_full_gramians(fo, limits), limits);
}

NormReport norm_report(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom, const FullGramians& full,
                       const DenseLimits& limits) {
  const GramianBlocks gb = solve_gramian_blocks(fo, rom, full, limits);
  NormReport out;
  out.h2_full = h2_norm_full(fo, full).norm;
  const double t22 = trace_of_product(rom.C * gb.P22, rom.C.transpose());
  out.h2_rom = clamped_sqrt(t22, t22);
  out.h2_error_P = h2_error_from_P(fo, rom, gb);
  out.h2_error_Q = h2_error_from_Q(fo, rom, gb);
  out.residuals = gb.residuals;
  return out;
}

}  // namespace morkit
