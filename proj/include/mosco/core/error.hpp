/**
 * @file error.hpp
 * @brief Error codes and the exception type used throughout the library.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace mosco {

enum class ErrorCode {
  MalformedSpec,
  OutOfBox,
  DegenerateSegment,
  EmptyScene,
  TooManyArcs,
  NoOtherPieces,
  NotOnSet,
  SearchFailed,
  NoExteriorBalls,
  ConeConditionFails,
  PreconditionNotMet,
  SceneTooFine,
  NotACrackEdge,
  NoConvergence,
  BadExponent,
  SingularSystem,
  BadTruncation,
  NonConvergence,
  ClassCheckFailed,
  MeshFailure,
  NonPositiveData,
  IoError,
  InvalidArgument,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace mosco
