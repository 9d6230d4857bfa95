#pragma once

#include <stdexcept>
#include <string>

namespace nodalab {

enum class ErrorKind {
  Domain,            // point expected on the boundary is not
  DegenerateNormal,  // normal undefined (corner)
  NotAGraph,         // boundary is not a graph over the requested window
  Precondition,
  Geometry,
  Construction,
  EmptyRegion,
  DegenerateField,
  Margin,
  Input,
  Convergence,
  RefinementNeeded,
  Fit,
  Resolution,
  Config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace nodalab
