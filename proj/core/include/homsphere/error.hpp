#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace homsphere {

enum class ErrorCode {
  NonPrime,
  DegreeOutOfRange,
  OverflowBound,
  DivisionByZero,
  ZeroElement,
  CapExceeded,
  NotUnimodular,
  RankTooLarge,
  NotFaithful,
  PrimeTooSmall,
  NoEffectiveAction,
  ParseError,
  UnknownGroup,
  InvalidWitness,
  NotSimple,
  ConfigMissing,
  UnknownFilter,
  GroupNotInReport,
  BadArgument,
};

/// All library failures surface as Error; `code()` identifies the contract
/// violation and `detail()` carries the offending value (cap, line number, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::int64_t detail = 0)
      : std::runtime_error(what), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  std::int64_t detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::int64_t detail_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what,
                               std::int64_t detail = 0) {
  throw Error(code, what, detail);
}

}  // namespace homsphere
