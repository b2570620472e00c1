#ifndef REEBFORGE_ERROR_HPP
#define REEBFORGE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace reebforge {

enum class ErrorKind {
  Parse,
  Validation,
  Packing,
  MarginViolation,
  HeightFailure,
  DegenerateEvent,
  MissingSingularAngle,
  EulerMismatch,
  CountMismatch,
  ResolutionTooCoarse,
  NoFactors,
  ExpansionTooLarge,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace reebforge

#endif
