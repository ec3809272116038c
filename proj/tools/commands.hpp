#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "morkit/irka_so.hpp"
#include "morkit/sysmodel.hpp"

namespace morkit::cli {

enum ExitCode { kOk = 0, kError = 1, kNotConverged = 2 };

struct RunConfig {
  std::string command;
  std::optional<Index> som_n1;
  std::optional<std::string> manifest;
  Index r = 0;
  double tol = 1e-6;
  int max_iter = 100;
  std::uint64_t seed = 0;
  std::string init = "logspaced";
  double grid_min = 1e-2;
  double grid_max = 1e4;
  std::size_t grid_points = 200;
  std::string out = ".";
  int repetitions = 5;

  // Exactly one input source, positive r, and a usable grid. Throws InvalidArgument.
  void validate() const;
};

SecondOrderSystem load_system(const RunConfig& cfg);
IrkaOptions irka_options(const RunConfig& cfg);
// Runs the SISO or MIMO reduction; requires r < n.
SpmorResult reduce_system(const RunConfig& cfg, const SecondOrderSystem& sos);

int cmd_reduce(const RunConfig& cfg, std::ostream& out);
int cmd_sigma(const RunConfig& cfg, std::ostream& out);
int cmd_h2err(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_speedup(const RunConfig& cfg, std::ostream& out);

// Parses arguments (without the program name) and dispatches. Errors are
// reported on `err` and mapped to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace morkit::cli
