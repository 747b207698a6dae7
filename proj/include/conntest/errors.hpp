#pragma once

#include <stdexcept>
#include <string>

namespace conntest {

// Base for every error raised by the library. The CLI maps these onto exit
// codes: internal invariant failures exit 3, everything else exits 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual bool is_internal() const noexcept { return false; }
};

#define CONNTEST_DEFINE_ERROR(Name)            \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(const std::string& what)     \
        : Error(std::string(#Name ": ") + what) {} \
  }

CONNTEST_DEFINE_ERROR(OutOfRange);
CONNTEST_DEFINE_ERROR(PhaseViolation);
CONNTEST_DEFINE_ERROR(InvalidEps);
CONNTEST_DEFINE_ERROR(LevelOutOfRange);
CONNTEST_DEFINE_ERROR(NotNormalized);
CONNTEST_DEFINE_ERROR(DegenerateLattice);
CONNTEST_DEFINE_ERROR(PremiseViolated);
CONNTEST_DEFINE_ERROR(TooLarge);
CONNTEST_DEFINE_ERROR(PatternViolation);
CONNTEST_DEFINE_ERROR(CostUnavailable);
CONNTEST_DEFINE_ERROR(InvalidParams);
CONNTEST_DEFINE_ERROR(DensityInfeasible);
CONNTEST_DEFINE_ERROR(PbmError);
CONNTEST_DEFINE_ERROR(IoError);
CONNTEST_DEFINE_ERROR(BudgetExhausted);

#undef CONNTEST_DEFINE_ERROR

// Raised when a result that must hold by construction does not.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what)
      : Error("InternalError: " + what) {}
  bool is_internal() const noexcept override { return true; }
};

class OutputNotConnected : public InternalError {
 public:
  explicit OutputNotConnected(const std::string& what)
      : InternalError("OutputNotConnected: " + what) {}
};

}  // namespace conntest
