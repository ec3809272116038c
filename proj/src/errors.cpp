#include "morkit/errors.hpp"

#include <cstdio>

namespace morkit {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::ShiftOnSpectrum: return "shift hits spectrum";
    case ErrorCode::SingularMatrix: return "singular matrix";
    case ErrorCode::NoConvergence: return "no convergence";
    case ErrorCode::RankDeficient: return "rank deficient";
    case ErrorCode::LyapunovSingular: return "Lyapunov equation singular";
    case ErrorCode::OversizeProblem: return "problem too large";
    case ErrorCode::Unstable: return "unstable system";
    case ErrorCode::InconsistentGramians: return "inconsistent Gramians";
    case ErrorCode::ResidualTooLarge: return "residual too large";
    case ErrorCode::GridTooNarrow: return "grid too narrow";
    case ErrorCode::ParseError: return "parse error";
    case ErrorCode::IoError: return "I/O error";
  }
  return "unknown error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

IrkaError::IrkaError(int iteration, const Error& cause)
    : Error(cause.code(), "IRKA iteration " + std::to_string(iteration) + ": " + cause.message()),
      iteration_(iteration) {}

std::string format_complex(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g%+.6gj", z.real(), z.imag());
  return buf;
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace morkit
