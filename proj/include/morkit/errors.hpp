#pragma once

#include <stdexcept>
#include <string>

#include "morkit/types.hpp"

namespace morkit {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  ShiftOnSpectrum,
  SingularMatrix,
  NoConvergence,
  RankDeficient,
  LyapunovSingular,
  OversizeProblem,
  Unstable,
  InconsistentGramians,
  ResidualTooLarge,
  GridTooNarrow,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix carried by what().
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

// Raised from inside an IRKA loop; keeps the code of the underlying failure.
class IrkaError : public Error {
 public:
  IrkaError(int iteration, const Error& cause);
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

std::string format_complex(Complex z);
std::string format_real(double x);

}  // namespace morkit
