#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace lineage_forge::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(LINEAGE_FORGE_FIXTURE_DIR) / name;
}

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string example1_script() { return read_fixture("customer.sql"); }

}  // namespace lineage_forge::testing
