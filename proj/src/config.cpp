#include "hsg/config.hpp"

#include "hsg/errors.hpp"
#include "hsg/gasket.hpp"

namespace hsg {

void RunConfig::validate() const {
  if (depth < 0 || depth > kDefaultDepthGuard) {
    throw ConfigError("depth: must be in [0, " + std::to_string(kDefaultDepthGuard) + "]");
  }
  if (sub_depth < 1 || depth + sub_depth > kDefaultDepthGuard) {
    throw ConfigError("sub-depth: must be >= 1 with depth + sub-depth <= " +
                      std::to_string(kDefaultDepthGuard));
  }
  if (samples < 1) throw ConfigError("samples: must be >= 1");
  if (norm_c <= 0.0) throw ConfigError("norm-c: must be positive");
  if (theta_grid.empty()) throw ConfigError("theta: grid must be nonempty");
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    if (theta_grid[i] <= 0.0) throw ConfigError("theta: values must be positive");
    if (i > 0 && theta_grid[i] >= theta_grid[i - 1]) {
      throw ConfigError("theta: grid must be strictly decreasing");
    }
  }
  parse_format(format);  // throws ConfigError on unknown format
  for (char c : word) {
    if (c < '1' || c > '3') throw ConfigError("word: must consist of digits 1-3");
  }
}

}  // namespace hsg
