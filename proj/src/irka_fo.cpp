#include "morkit/irka_fo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "irka_loop.hpp"
#include "morkit/numkernel.hpp"

namespace morkit {

namespace {

bool complex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

VectorC unit_or_first(VectorC v) {
  const double n = v.norm();
  if (n > 0.0 && std::isfinite(n)) return v / n;
  VectorC e = VectorC::Zero(v.size());
  if (e.size() > 0) e(0) = 1.0;
  return e;
}

// Solves one linear system per real shift or conjugate pair and fills the
// partner column by conjugation.
DenseMatrixC shifted_columns(const FirstOrderSystem& sys, const std::vector<Complex>& shifts,
                             const DenseMatrixC& dirs, bool transposed) {
  const std::vector<Index> partner = conjugate_partners(shifts);
  const Index r = static_cast<Index>(shifts.size());
  DenseMatrixC cols(sys.n(), r);
  const DenseMatrixC rhs = transposed ? DenseMatrixC(sys.C.transpose().cast<Complex>() * dirs)
                                      : DenseMatrixC(sys.B.cast<Complex>() * dirs);
  for (Index i = 0; i < r; ++i) {
    if (partner[i] >= 0 && partner[i] < i) {
      cols.col(i) = cols.col(partner[i]).conjugate();
      continue;
    }
    const Factorization f = assemble_linear_pencil(sys.E, sys.A, shifts[i]);
    cols.col(i) = transposed ? f.solve_transposed(rhs.col(i)) : f.solve(rhs.col(i));
  }
  return cols;
}

void add_stability_warnings(const FirstOrderSystem& sys, const ReducedFirstOrderSystem& rom,
                            const DenseLimits& limits, IrkaReport& report) {
  if (sys.n() <= limits.small_dense) {
    if (!is_stable(sys, true, limits).stable) report.warnings.push_back("full model is not stable");
  } else {
    report.warnings.push_back("stability of the full model was not verified");
  }
  if (!is_stable(rom, limits).stable) report.warnings.push_back("reduced model is not stable");
}

}  // namespace

void IrkaOptions::validate(Index order) const {
  if (r < 1 || r > order) {
    throw Error(ErrorCode::InvalidArgument, "reduced order " + std::to_string(r) +
                                                " must lie in [1, " + std::to_string(order) + "]");
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be at least 1");
  if (init == ShiftInit::User && !user_shifts) {
    throw Error(ErrorCode::InvalidArgument, "user shift initialization needs user_shifts");
  }
}

ShiftSet initial_shifts(const IrkaOptions& opts, const FrequencyGrid& band, Index inputs, Index outputs) {
  const Index r = opts.r;
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "initial_shifts needs r >= 1");
  if (inputs < 1 || outputs < 1) throw Error(ErrorCode::InvalidArgument, "inputs and outputs must be >= 1");
  if (opts.init == ShiftInit::User) {
    if (!opts.user_shifts) throw Error(ErrorCode::InvalidArgument, "no user shifts given");
    if (opts.user_shifts->size() != r) {
      throw Error(ErrorCode::InvalidArgument, "user shift count differs from r");
    }
    opts.user_shifts->validate(inputs, outputs);
    return *opts.user_shifts;
  }

  std::vector<Complex> shifts(r);
  DenseMatrixC right = DenseMatrixC::Zero(inputs, r);
  DenseMatrixC left = DenseMatrixC::Zero(outputs, r);
  if (opts.init == ShiftInit::LogSpaced) {
    const double lo = band.front();
    const double hi = r == 1 ? band.front() : band.back();
    const FrequencyGrid pts = FrequencyGrid::logspace(lo, hi, static_cast<std::size_t>(r));
    for (Index i = 0; i < r; ++i) {
      shifts[i] = pts.points()[i];
      right(i % inputs, i) = 1.0;
      left(i % outputs, i) = 1.0;
    }
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> expo(std::log10(band.front()), std::log10(band.back()));
    std::normal_distribution<double> normal;
    for (Index i = 0; i < r; ++i) {
      shifts[i] = std::pow(10.0, expo(rng));
      for (Index k = 0; k < inputs; ++k) right(k, i) = normal(rng);
      for (Index k = 0; k < outputs; ++k) left(k, i) = normal(rng);
      right.col(i) = unit_or_first(right.col(i));
      left.col(i) = unit_or_first(left.col(i));
    }
  }
  return make_shift_set(std::move(shifts), std::move(right), std::move(left));
}

ProjectionPair build_projectors_fo(const FirstOrderSystem& sys, const ShiftSet& shifts) {
  sys.validate();
  shifts.validate(sys.inputs(), sys.outputs());
  ProjectionPair pp;
  const DenseMatrixC v = shifted_columns(sys, shifts.shifts, shifts.right_dirs, false);
  const DenseMatrixC w = shifted_columns(sys, shifts.left_shifts, shifts.left_dirs, true);
  pp.V = orthonormal_basis(realify_columns(v, shifts.shifts), "V");
  pp.W = orthonormal_basis(realify_columns(w, shifts.left_shifts), "W");
  return pp;
}

ReducedFirstOrderSystem reduce_fo(const FirstOrderSystem& sys, const ProjectionPair& pp) {
  sys.validate();
  if (pp.V.rows() != sys.n() || pp.W.rows() != sys.n() || pp.V.cols() != pp.W.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "projectors do not match the system");
  }
  ReducedFirstOrderSystem rom;
  rom.E = pp.W.transpose() * (sys.E * pp.V);
  rom.A = pp.W.transpose() * (sys.A * pp.V);
  rom.B = pp.W.transpose() * sys.B;
  rom.C = sys.C * pp.V;
  rom.Da = sys.Da;
  if (rom.n() > 0) {
    const Eigen::PartialPivLU<DenseMatrix> lu(rom.E);
    if (!(lu.rcond() > 1e-14)) {
      throw Error(ErrorCode::SingularMatrix,
                  "reduced E = W^T E V is singular (rcond " + format_real(lu.rcond()) + ")");
    }
  }
  return rom;
}

ShiftSet update_shifts(const ReducedFirstOrderSystem& rom, bool tangential, const DenseLimits& limits) {
  const EigenTriplets eig = generalized_eig_small(rom.A, rom.E, limits);
  const Index r = rom.n();
  std::vector<Complex> shifts(r);
  DenseMatrixC right, left;
  if (tangential) {
    right.resize(rom.inputs(), r);
    left.resize(rom.outputs(), r);
  } else {
    right = DenseMatrixC::Ones(1, r);
    left = DenseMatrixC::Ones(1, r);
  }
  const DenseMatrixC bhat_t = rom.B.transpose().cast<Complex>();
  const DenseMatrixC chat = rom.C.cast<Complex>();
  for (Index i = 0; i < r; ++i) {
    const Complex lambda = eig.values(i);
    Complex alpha = -lambda;
    if (!(alpha.real() > 0.0)) alpha = Complex(std::abs(lambda.real()), -lambda.imag());
    if (alpha.real() == 0.0) {
      throw Error(ErrorCode::ShiftOnSpectrum,
                  "reduced pencil has eigenvalue " + format_complex(lambda) + " on the imaginary axis");
    }
    shifts[i] = alpha;
    if (tangential) {
      right.col(i) = unit_or_first(-(bhat_t * eig.left.col(i).conjugate()));
      left.col(i) = unit_or_first(chat * eig.right.col(i));
    }
  }
  // Exact conjugate symmetry for paired shifts.
  const std::vector<Index> partner = conjugate_partners(shifts);
  for (Index i = 0; i < r; ++i) {
    const Index j = partner[i];
    if (j > i) {
      shifts[j] = std::conj(shifts[i]);
      right.col(j) = right.col(i).conjugate();
      left.col(j) = left.col(i).conjugate();
    } else if (j < 0) {
      shifts[i] = shifts[i].real();
      right.col(i) = right.col(i).real().cast<Complex>();
      left.col(i) = left.col(i).real().cast<Complex>();
    }
  }
  return make_shift_set(std::move(shifts), std::move(right), std::move(left));
}

double shift_change(const std::vector<Complex>& current, const std::vector<Complex>& previous) {
  if (current.size() != previous.size()) return std::numeric_limits<double>::infinity();
  std::vector<Complex> a = current;
  std::vector<Complex> b = previous;
  std::sort(a.begin(), a.end(), complex_less);
  std::sort(b.begin(), b.end(), complex_less);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
  }
  return worst;
}

IrkaResult irka_mimo(const FirstOrderSystem& sys, const IrkaOptions& opts) {
  sys.validate();
  opts.validate(sys.n());
  if (sys.inputs() < 1 || sys.outputs() < 1) {
    throw Error(ErrorCode::InvalidArgument, "system needs at least one input and one output");
  }
  const bool tangential = sys.inputs() > 1 || sys.outputs() > 1;
  IrkaResult result;
  ShiftSet start = initial_shifts(opts, opts.band, sys.inputs(), sys.outputs());
  if (!tangential) {
    start.right_dirs.setOnes();
    start.left_dirs.setOnes();
  }
  result.report = detail::run_irka(
      [&](const ShiftSet& s) { return reduce_fo(sys, build_projectors_fo(sys, s)); }, std::move(start),
      opts, tangential, result.rom);
  add_stability_warnings(sys, result.rom, opts.limits, result.report);
  return result;
}

IrkaResult irka_siso(const FirstOrderSystem& sys, const IrkaOptions& opts) {
  sys.validate();
  if (sys.inputs() != 1 || sys.outputs() != 1) {
    throw Error(ErrorCode::InvalidArgument, "irka_siso needs a single-input single-output system");
  }
  return irka_mimo(sys, opts);
}

}  // namespace morkit
