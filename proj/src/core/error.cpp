#include "mosco/core/error.hpp"

namespace mosco {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::MalformedSpec: return "MalformedSpec";
    case ErrorCode::OutOfBox: return "OutOfBox";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::EmptyScene: return "EmptyScene";
    case ErrorCode::TooManyArcs: return "TooManyArcs";
    case ErrorCode::NoOtherPieces: return "NoOtherPieces";
    case ErrorCode::NotOnSet: return "NotOnSet";
    case ErrorCode::SearchFailed: return "SearchFailed";
    case ErrorCode::NoExteriorBalls: return "NoExteriorBalls";
    case ErrorCode::ConeConditionFails: return "ConeConditionFails";
    case ErrorCode::PreconditionNotMet: return "PreconditionNotMet";
    case ErrorCode::SceneTooFine: return "SceneTooFine";
    case ErrorCode::NotACrackEdge: return "NotACrackEdge";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::BadTruncation: return "BadTruncation";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ClassCheckFailed: return "ClassCheckFailed";
    case ErrorCode::MeshFailure: return "MeshFailure";
    case ErrorCode::NonPositiveData: return "NonPositiveData";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace mosco
