#pragma once

#include <stdexcept>
#include <string>

namespace irenergy {

/// Source position, 1-based. Zero means unknown.
struct Location {
  int line = 0;
  int column = 0;
};

/// Error raised by a pipeline stage. `stage()` names the stage ("parse",
/// "translate", "model", ...) so the CLI can report where things went wrong.
class Error : public std::runtime_error {
public:
  Error(std::string stage, std::string message, Location loc = {});

  const std::string& stage() const { return stage_; }
  const std::string& detail() const { return detail_; }
  Location location() const { return loc_; }

private:
  std::string stage_;
  std::string detail_;
  Location loc_;
};

} // namespace irenergy
