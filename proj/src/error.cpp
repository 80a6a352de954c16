#include "nasgraph/error.hpp"

namespace nasgraph {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedEncoding: return "MalformedEncoding";
    case ErrorKind::UnknownOperation: return "UnknownOperation";
    case ErrorKind::BadPredecessorIndex: return "BadPredecessorIndex";
    case ErrorKind::NotUpperTriangular: return "NotUpperTriangular";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ChannelOutOfRange: return "ChannelOutOfRange";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::DegenerateGraph: return "DegenerateGraph";
    case ErrorKind::EmptyEdgeSet: return "EmptyEdgeSet";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NonFiniteScore: return "NonFiniteScore";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::MismatchedUniverse: return "MismatchedUniverse";
    case ErrorKind::PoolTooSmall: return "PoolTooSmall";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::InvalidArch: return "InvalidArch";
    case ErrorKind::AccuracyOutOfRange: return "AccuracyOutOfRange";
    case ErrorKind::UnknownDataset: return "UnknownDataset";
  }
  return "Error";
}

}  // namespace nasgraph
