#include "morkit/config.hpp"

#include <cstdlib>
#include <string>

#include "morkit/errors.hpp"

namespace morkit {

DenseLimits default_limits() {
  DenseLimits limits;
  if (const char* env = std::getenv("MORKIT_DENSE_LIMIT"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const long long value = std::stoll(env, &used);
      if (used != std::string(env).size() || value <= 0) throw std::invalid_argument(env);
      limits.dense_gramian = static_cast<Index>(value);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("MORKIT_DENSE_LIMIT must be a positive integer, got '") + env + "'");
    }
  }
  return limits;
}

}  // namespace morkit
