#pragma once

#include "morkit/types.hpp"

namespace morkit {

// Size guards for the dense kernels. `small_dense` bounds reduced-order
// eigenproblems; `dense_gramian` bounds full-model Gramian solves (O(n^3)).
struct DenseLimits {
  Index small_dense = 500;
  Index dense_gramian = 4000;
};

// Defaults, with `dense_gramian` overridden by MORKIT_DENSE_LIMIT when set.
DenseLimits default_limits();

}  // namespace morkit
