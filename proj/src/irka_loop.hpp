#pragma once

#include "morkit/errors.hpp"
#include "morkit/irka_fo.hpp"

namespace morkit::detail {

// Shared fixed-point loop. `reduce(shifts)` returns the first-order reduced
// pencil for the given shifts. On return `rom` holds the reduction at the
// final shifts.
template <class Reduce>
IrkaReport run_irka(Reduce&& reduce, ShiftSet shifts, const IrkaOptions& opts, bool tangential,
                    ReducedFirstOrderSystem& rom) {
  IrkaReport report;
  for (int it = 1; it <= opts.max_iter; ++it) {
    ShiftSet next;
    try {
      rom = reduce(shifts);
      next = update_shifts(rom, tangential, opts.limits);
    } catch (const Error& e) {
      throw IrkaError(it, e);
    }
    const double change = shift_change(next.shifts, shifts.shifts);
    report.iterations = it;
    report.shift_changes.push_back(change);
    report.shift_history.push_back(next.shifts);
    shifts = std::move(next);
    if (change <= opts.tol) {
      report.converged = true;
      break;
    }
  }
  try {
    rom = reduce(shifts);
  } catch (const Error& e) {
    throw IrkaError(report.iterations + 1, e);
  }
  report.final_shifts = std::move(shifts);
  return report;
}

}  // namespace morkit::detail
