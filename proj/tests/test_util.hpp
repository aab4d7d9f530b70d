#pragma once

#include <fstream>
#include <sstream>
#include <string>

namespace ocds::testing {

inline std::string scenario_path(const std::string& name) {
  return std::string(OCDS_SCENARIO_DIR) + "/" + name;
}

inline std::string read_scenario_file(const std::string& name) {
  std::ifstream in(scenario_path(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ocds::testing
