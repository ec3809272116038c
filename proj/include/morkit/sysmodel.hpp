#pragma once

#include <optional>
#include <string>
#include <vector>

#include "morkit/config.hpp"
#include "morkit/errors.hpp"
#include "morkit/types.hpp"

namespace morkit {

// M q'' + D q' + K q = H u,  y = L q.
struct SecondOrderSystem {
  SparseMatrix M, D, K;
  DenseMatrix H;  // n x p
  DenseMatrix L;  // m x n

  Index n() const { return M.rows(); }
  Index inputs() const { return H.cols(); }
  Index outputs() const { return L.rows(); }
  void validate() const;
};

// E x' = A x + B u,  y = C x + Da u.
struct FirstOrderSystem {
  SparseMatrix E, A;
  DenseMatrix B;   // k x p
  DenseMatrix C;   // m x k
  DenseMatrix Da;  // m x p

  Index n() const { return E.rows(); }
  Index inputs() const { return B.cols(); }
  Index outputs() const { return C.rows(); }
  void validate() const;
};

enum class Level { Position, Velocity };
const char* to_string(Level level);

struct ReducedSecondOrderSystem {
  Level level = Level::Position;
  DenseMatrix M, D, K;
  DenseMatrix H;  // r x p
  DenseMatrix L;  // m x r

  Index n() const { return M.rows(); }
  Index inputs() const { return H.cols(); }
  Index outputs() const { return L.rows(); }
  void validate() const;
};

struct ReducedFirstOrderSystem {
  DenseMatrix E, A, B, C, Da;

  Index n() const { return E.rows(); }
  Index inputs() const { return B.cols(); }
  Index outputs() const { return C.rows(); }
  void validate() const;
};

// Positive, finite, strictly increasing frequencies in rad/s.
class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::vector<double> points);

  static FrequencyGrid logspace(double lo, double hi, std::size_t count);
  // 200 points on [1e-2, 1e4].
  static FrequencyGrid default_grid();

  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }

 private:
  std::vector<double> points_;
};

// E = [I 0; 0 M], A = [0 I; -K -D], B = [0; H], C = [L 0], Da = 0.
FirstOrderSystem linearize(const SecondOrderSystem& sos);
ReducedFirstOrderSystem linearize(const ReducedSecondOrderSystem& rom);

// Dense copies, for tests and the identity "reduction".
ReducedFirstOrderSystem to_dense(const FirstOrderSystem& fo);
ReducedSecondOrderSystem to_dense(const SecondOrderSystem& sos);

// Transfer-function values. Throws ShiftOnSpectrum when the resolvent is singular at s.
DenseMatrixC tf_eval(const SecondOrderSystem& sys, Complex s);
DenseMatrixC tf_eval(const FirstOrderSystem& sys, Complex s);
DenseMatrixC tf_eval(const ReducedSecondOrderSystem& sys, Complex s);
DenseMatrixC tf_eval(const ReducedFirstOrderSystem& sys, Complex s);

double sigma_max(const DenseMatrixC& g);

struct SigmaPoint {
  double omega;
  double sigma;
};

struct ErrorPoint {
  double omega;
  double abs_err;
  std::optional<double> rel_err;  // absent where sigma_max(G) = 0
};

template <class System>
std::vector<SigmaPoint> sigma_sweep(const System& sys, const FrequencyGrid& grid) {
  std::vector<SigmaPoint> out;
  out.reserve(grid.size());
  for (const double w : grid.points()) {
    try {
      out.push_back({w, sigma_max(tf_eval(sys, Complex(0.0, w)))});
    } catch (const Error& e) {
      throw Error(e.code(), "at omega = " + std::to_string(w) + ": " + e.message());
    }
  }
  return out;
}

template <class Full, class Rom>
std::vector<ErrorPoint> error_sweep(const Full& full, const Rom& rom, const FrequencyGrid& grid) {
  std::vector<ErrorPoint> out;
  out.reserve(grid.size());
  for (const double w : grid.points()) {
    const Complex s(0.0, w);
    try {
      const DenseMatrixC g = tf_eval(full, s);
      const double abs_err = sigma_max(g - tf_eval(rom, s));
      const double ref = sigma_max(g);
      ErrorPoint p{w, abs_err, std::nullopt};
      if (ref > 0.0) p.rel_err = abs_err / ref;
      out.push_back(p);
    } catch (const Error& e) {
      throw Error(e.code(), "at omega = " + std::to_string(w) + ": " + e.message());
    }
  }
  return out;
}

struct StabilityInfo {
  bool stable = false;
  double abscissa = 0.0;  // largest real part over finite eigenvalues
};

// Reduced systems are checked against limits.small_dense (pencil order);
// full systems require allow_full and are bounded by limits.dense_gramian.
StabilityInfo is_stable(const ReducedSecondOrderSystem& sys, const DenseLimits& limits = default_limits());
StabilityInfo is_stable(const ReducedFirstOrderSystem& sys, const DenseLimits& limits = default_limits());
StabilityInfo is_stable(const SecondOrderSystem& sys, bool allow_full,
                        const DenseLimits& limits = default_limits());
StabilityInfo is_stable(const FirstOrderSystem& sys, bool allow_full,
                        const DenseLimits& limits = default_limits());

// CSV with header `omega,sigma` / `omega,abs_err,rel_err`, %.17e values.
std::string sigma_csv(const std::vector<SigmaPoint>& points);
std::string error_csv(const std::vector<ErrorPoint>& points);

}  // namespace morkit
