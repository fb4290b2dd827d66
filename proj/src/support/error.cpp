#include "irenergy/support/error.hpp"

namespace irenergy {

namespace {

std::string render(const std::string& stage, const std::string& message,
                   Location loc) {
  std::string out = stage + " error";
  if (loc.line > 0) {
    out += " at " + std::to_string(loc.line);
    if (loc.column > 0)
      out += ":" + std::to_string(loc.column);
  }
  return out + ": " + message;
}

} // namespace

Error::Error(std::string stage, std::string message, Location loc)
    : std::runtime_error(render(stage, message, loc)), stage_(std::move(stage)),
      detail_(std::move(message)), loc_(loc) {}

} // namespace irenergy
