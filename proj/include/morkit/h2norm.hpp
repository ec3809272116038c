#pragma once

#include <cmath>
#include <map>
#include <string>

#include "morkit/config.hpp"
#include "morkit/sysmodel.hpp"

namespace morkit {

// Realization of G(s) - Ghat(s): E_err = diag(E, Ehat), A_err = diag(A, Ahat),
// B_err = [B; Bhat], C_err = [C, -Chat]. Kept blockwise.
struct ErrorSystem {
  FirstOrderSystem full;
  ReducedFirstOrderSystem rom;

  Index n() const { return full.n() + rom.n(); }
  Index inputs() const { return full.inputs(); }
  Index outputs() const { return full.outputs(); }
};

ErrorSystem build_error_system(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom);
DenseMatrixC tf_eval(const ErrorSystem& sys, Complex s);

// Relative residuals of the Gramian equations, keyed P11, P12, P22, Q11, Q12, Q22.
using ResidualMap = std::map<std::string, double>;

// Solutions of
//   A P11 E^T + E P11 A^T + B B^T = 0        A^T Q11 E + E^T Q11 A + C^T C = 0
//   A P12 Ehat^T + E P12 Ahat^T + B Bhat^T = 0
//   A^T Q12 Ehat + E^T Q12 Ahat - C^T Chat = 0
//   Ahat P22 Ehat^T + Ehat P22 Ahat^T + Bhat Bhat^T = 0
//   Ahat^T Q22 Ehat + Ehat^T Q22 Ahat + Chat^T Chat = 0
struct GramianBlocks {
  DenseMatrix P11, P12, P22;
  DenseMatrix Q11, Q12, Q22;
  ResidualMap residuals;
};

// The full-model blocks only; reusable across several reduced models.
struct FullGramians {
  DenseMatrix P11, Q11;
  ResidualMap residuals;
};

// Largest accepted relative residual for any Gramian equation.
inline constexpr double kGramianResidualTol = 1e-8;
// Accepted negative eigenvalues of a Gramian, relative to its largest.
inline constexpr double kGramianPsdTol = 1e-10;

// Throws Unstable when the model is not asymptotically stable, OversizeProblem
// above limits.dense_gramian, ResidualTooLarge and InconsistentGramians when
// a solution fails its residual or semidefiniteness check.
FullGramians solve_full_gramians(const FirstOrderSystem& fo, const DenseLimits& limits = default_limits());

GramianBlocks solve_gramian_blocks(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom,
                                   const DenseLimits& limits = default_limits());
GramianBlocks solve_gramian_blocks(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom,
                                   const FullGramians& full, const DenseLimits& limits = default_limits());

// ||G - Ghat||_H2 from the controllability blocks:
//   tr(C P11 C^T) + tr(Chat P22 Chat^T) - 2 tr(C P12 Chat^T).
double h2_error_from_P(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom, const GramianBlocks& gb);
// Same from the observability blocks:
//   tr(B^T Q11 B) + tr(Bhat^T Q22 Bhat) + 2 tr(B^T Q12 Bhat).
double h2_error_from_Q(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom, const GramianBlocks& gb);

// Square root of a squared-norm total; totals in [-1e-12 * leading, 0) become 0,
// lower totals throw InconsistentGramians.
double clamped_sqrt(double total, double leading);

// P11 = Zp Zp^T, Q11 = Zq Zq^T.
struct GramianFactors {
  DenseMatrix Zp, Zq;
};

// Semidefinite factor X = Z Z^T from an eigendecomposition, dropping
// eigenvalues below 1e-12 times the largest.
DenseMatrix semidefinite_factor(const DenseMatrix& X);

struct H2NormResult {
  double norm = 0.0;       // ||C Zp||_F
  double norm_dual = 0.0;  // ||B^T Zq||_F
  GramianFactors factors;
  ResidualMap residuals;
};

H2NormResult h2_norm_full(const FirstOrderSystem& fo, const DenseLimits& limits = default_limits());
H2NormResult h2_norm_full(const FirstOrderSystem& fo, const FullGramians& full);
// Dense Gramians of a reduced model.
double h2_norm(const ReducedFirstOrderSystem& rom, const DenseLimits& limits = default_limits());

namespace detail {
void check_quadrature_tails(double f_first, double f_last, double peak, double integral, double omega_first);
}  // namespace detail

// sqrt((1/pi) * int_0^inf ||G(j w)||_F^2 dw): trapezoidal rule on the grid plus
// a rectangle on [0, grid.front()]. Throws GridTooNarrow unless the integrand
// at grid.back() is below 1e-12 of its peak and the part below grid.front()
// contributes less than 1e-3 of the total.
template <class System>
double h2_norm_quadrature(const System& sys, const FrequencyGrid& grid) {
  const auto& w = grid.points();
  std::vector<double> f(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    try {
      f[i] = tf_eval(sys, Complex(0.0, w[i])).squaredNorm();
    } catch (const Error& e) {
      throw Error(e.code(), "at omega = " + std::to_string(w[i]) + ": " + e.message());
    }
  }
  double integral = f.front() * w.front();
  double peak = f.front();
  for (std::size_t i = 1; i < w.size(); ++i) {
    integral += 0.5 * (f[i] + f[i - 1]) * (w[i] - w[i - 1]);
    peak = std::max(peak, f[i]);
  }
  if (peak == 0.0) return 0.0;
  detail::check_quadrature_tails(f.front(), f.back(), peak, integral, w.front());
  return std::sqrt(integral / M_PI);
}

// Norm report of a reduction: full norm, reduced norm, both error formulas,
// and every equation residual.
struct NormReport {
  double h2_full = 0.0;
  double h2_rom = 0.0;
  double h2_error_P = 0.0;
  double h2_error_Q = 0.0;
  ResidualMap residuals;
};

NormReport norm_report(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom,
                       const DenseLimits& limits = default_limits());
NormReport norm_report(const FirstOrderSystem& fo, const ReducedFirstOrderSystem& rom,
                       const FullGramians& full, const DenseLimits& limits = default_limits());

}  // namespace morkit
