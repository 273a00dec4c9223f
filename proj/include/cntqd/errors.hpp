#pragma once

#include <stdexcept>
#include <string>

namespace cntqd {

// Process exit code attached to each error class.  The CLI front end maps a
// thrown Error to its category's exit code and prints one machine-parsable
// line "error: <Kind>: <message>" on stderr.
enum class ErrorCategory : int {
  validation = 2,  // malformed or out-of-contract input
  numeric = 3,     // a solver or search failed to produce a result
  io = 4,          // filesystem failure
};

class Error : public std::runtime_error {
 public:
  Error(std::string kind, ErrorCategory category, std::string message)
      : std::runtime_error(kind + ": " + message),
        kind_(std::move(kind)),
        message_(std::move(message)),
        category_(category) {}

  const std::string& kind() const { return kind_; }
  const std::string& message() const { return message_; }
  ErrorCategory category() const { return category_; }
  int exit_code() const { return static_cast<int>(category_); }

 private:
  std::string kind_;
  std::string message_;
  ErrorCategory category_;
};

#define CNTQD_DEFINE_ERROR(Name, Category)                      \
  struct Name : Error {                                         \
    explicit Name(const std::string& message)                   \
        : Error(#Name, ErrorCategory::Category, message) {}     \
  }

CNTQD_DEFINE_ERROR(ValidationError, validation);
CNTQD_DEFINE_ERROR(ParseError, validation);
CNTQD_DEFINE_ERROR(UnknownKey, validation);
CNTQD_DEFINE_ERROR(NonHermitianInput, validation);
CNTQD_DEFINE_ERROR(SpaceMismatch, validation);
CNTQD_DEFINE_ERROR(InvalidPartition, validation);
CNTQD_DEFINE_ERROR(DimensionMismatch, validation);
CNTQD_DEFINE_ERROR(EmptyGrid, validation);
CNTQD_DEFINE_ERROR(WrongPulseKind, validation);
CNTQD_DEFINE_ERROR(CoincidentPositions, validation);
CNTQD_DEFINE_ERROR(OutsideTube, validation);
CNTQD_DEFINE_ERROR(NotConverged, validation);
CNTQD_DEFINE_ERROR(NoCrossingFound, numeric);
CNTQD_DEFINE_ERROR(NoResonanceFound, numeric);
CNTQD_DEFINE_ERROR(NonConvergence, numeric);
CNTQD_DEFINE_ERROR(StepSizeTooCoarse, numeric);
CNTQD_DEFINE_ERROR(IoError, io);

#undef CNTQD_DEFINE_ERROR

}  // namespace cntqd
