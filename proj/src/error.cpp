#include "dustradar/error.hpp"

namespace dustradar {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonFinite: return "NonFinite";
    case ErrorKind::kAngleOutOfRange: return "AngleOutOfRange";
    case ErrorKind::kAngularMismatch: return "AngularMismatch";
    case ErrorKind::kNegativeRange: return "NegativeRange";
    case ErrorKind::kNegativeRadius: return "NegativeRadius";
    case ErrorKind::kZeroMinSize: return "ZeroMinSize";
    case ErrorKind::kEmptyCluster: return "EmptyCluster";
    case ErrorKind::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::kMismatchedClustering: return "MismatchedClustering";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kInvalidSpec: return "InvalidSpec";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kNonMonotonicSeq: return "NonMonotonicSeq";
    case ErrorKind::kFrameMismatch: return "FrameMismatch";
    case ErrorKind::kSinkError: return "SinkError";
  }
  return "Unknown";
}

}  // namespace dustradar
