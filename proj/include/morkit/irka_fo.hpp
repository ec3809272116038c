#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "morkit/config.hpp"
#include "morkit/projection.hpp"
#include "morkit/sysmodel.hpp"

namespace morkit {

enum class ShiftInit { LogSpaced, User, SeededRandom };

struct IrkaOptions {
  Index r = 0;
  double tol = 1e-6;
  int max_iter = 100;
  ShiftInit init = ShiftInit::LogSpaced;
  std::uint64_t seed = 0;
  std::optional<ShiftSet> user_shifts;  // required for ShiftInit::User
  // Range for generated initial shifts; only front() and back() are used.
  FrequencyGrid band = FrequencyGrid::logspace(1e-2, 1e2, 2);
  DenseLimits limits = default_limits();

  // Requires 1 <= r <= order, tol > 0, max_iter >= 1. Throws InvalidArgument.
  void validate(Index order) const;
};

struct IrkaReport {
  int iterations = 0;
  std::vector<double> shift_changes;                // one per iteration
  std::vector<std::vector<Complex>> shift_history;  // shifts after each update
  bool converged = false;
  ShiftSet final_shifts;
  std::vector<std::string> warnings;
};

// r shifts: log-spaced positive reals over [band.front(), band.back()] with
// cycled coordinate directions, log-uniform random positive reals with unit
// random directions, or the user's set.
ShiftSet initial_shifts(const IrkaOptions& opts, const FrequencyGrid& band, Index inputs = 1,
                        Index outputs = 1);

// V = orth((alpha_i E - A)^{-1} B b_i), W = orth((beta_i E^T - A^T)^{-1} C^T c_i).
ProjectionPair build_projectors_fo(const FirstOrderSystem& sys, const ShiftSet& shifts);

// Ehat = W^T E V, Ahat = W^T A V, Bhat = W^T B, Chat = C V, Dahat = Da.
// Throws SingularMatrix when Ehat is singular.
ReducedFirstOrderSystem reduce_fo(const FirstOrderSystem& sys, const ProjectionPair& pp);

// Next shifts from the reduced pencil: alpha_i = -lambda_i (mirrored into the
// right half plane), b_i = -Bhat^T conj(y_i), c_i = Chat z_i, unit-normalized.
// With tangential = false all directions are 1 (SISO).
ShiftSet update_shifts(const ReducedFirstOrderSystem& rom, bool tangential, const DenseLimits& limits);

// max_i |a_i - b_i| / |b_i| after sorting both lists by (Re, Im).
double shift_change(const std::vector<Complex>& current, const std::vector<Complex>& previous);

struct IrkaResult {
  ReducedFirstOrderSystem rom;
  IrkaReport report;
};

IrkaResult irka_mimo(const FirstOrderSystem& sys, const IrkaOptions& opts);
// Requires p = m = 1.
IrkaResult irka_siso(const FirstOrderSystem& sys, const IrkaOptions& opts);

struct InterpolationTolerances {
  double value_rel = 1e-8;
  double hermite_rel = 1e-5;
};

struct InterpolationResidual {
  Complex shift;
  double right = 0.0, right_rel = 0.0;  // ||(G - Ghat)(alpha) b||
  double left = 0.0, left_rel = 0.0;    // ||c^T (G - Ghat)(beta)||
  std::optional<double> hermite, hermite_rel;  // |c^T (G' - Ghat')(alpha) b| when alpha = beta
  bool ok = true;
};

namespace detail {
inline double ratio(double num, double den) { return den > 0.0 ? num / den : num; }
}  // namespace detail

// Interpolation residuals at each shift. Derivatives use a central difference
// with step 1e-6 |alpha|.
template <class Full, class Rom>
std::vector<InterpolationResidual> check_interpolation(const Full& full, const Rom& rom,
                                                       const ShiftSet& shifts,
                                                       const InterpolationTolerances& tol = {}) {
  std::vector<InterpolationResidual> out;
  for (Index i = 0; i < shifts.size(); ++i) {
    const Complex a = shifts.shifts[i];
    const Complex b = shifts.left_shifts[i];
    const VectorC bd = shifts.right_dirs.col(i);
    const VectorC cd = shifts.left_dirs.col(i);
    InterpolationResidual res;
    res.shift = a;
    const DenseMatrixC ga = tf_eval(full, a);
    const VectorC gab = ga * bd;
    res.right = (gab - tf_eval(rom, a) * bd).norm();
    res.right_rel = detail::ratio(res.right, gab.norm());
    const DenseMatrixC gb = tf_eval(full, b);
    const VectorC cgb = gb.transpose() * cd;
    res.left = (cgb - tf_eval(rom, b).transpose() * cd).norm();
    res.left_rel = detail::ratio(res.left, cgb.norm());
    res.ok = res.right_rel <= tol.value_rel && res.left_rel <= tol.value_rel;
    if (a == b) {
      const double h = 1e-6 * std::abs(a);
      const DenseMatrixC dg = (tf_eval(full, a + h) - tf_eval(full, a - h)) / (2.0 * h);
      const DenseMatrixC dr = (tf_eval(rom, a + h) - tf_eval(rom, a - h)) / (2.0 * h);
      const Complex full_d = cd.transpose() * dg * bd;
      const Complex rom_d = cd.transpose() * dr * bd;
      res.hermite = std::abs(full_d - rom_d);
      res.hermite_rel = detail::ratio(*res.hermite, std::abs(full_d));
      res.ok = res.ok && *res.hermite_rel <= tol.hermite_rel;
    }
    out.push_back(res);
  }
  return out;
}

}  // namespace morkit
