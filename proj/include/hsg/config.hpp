#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsg/table.hpp"

namespace hsg {

struct RunConfig {
  int depth = 6;
  int sub_depth = 2;
  std::vector<double> theta_grid = {0.2, 0.1, 0.05, 0.025};
  int samples = 10000;
  std::uint64_t seed = 1;
  double norm_c = 0.5;
  std::string format = "csv";
  std::string out_dir = "out";
  std::string word;  // optional explicit word for word-level commands

  TableFormat table_format() const { return parse_format(format); }

  // Throws ConfigError naming the offending field.
  void validate() const;
};

}  // namespace hsg
