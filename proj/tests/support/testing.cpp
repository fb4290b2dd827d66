#include "testing.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace irenergy::testing {

std::string source_path(const std::string& rel) {
  return std::string(IRENERGY_SOURCE_DIR) + "/" + rel;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string read_source(const std::string& rel) { return read_file(source_path(rel)); }

} // namespace irenergy::testing
