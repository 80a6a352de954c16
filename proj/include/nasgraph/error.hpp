#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nasgraph {

enum class ErrorKind {
  // architecture encodings
  MalformedEncoding,
  UnknownOperation,
  BadPredecessorIndex,
  NotUpperTriangular,
  DimensionMismatch,
  // tensors and probing
  ShapeMismatch,
  ChannelOutOfRange,
  // graph measures
  EmptyGraph,
  DegenerateGraph,
  EmptyEdgeSet,
  // rank statistics
  EmptyInput,
  NonFiniteScore,
  LengthMismatch,
  DegenerateInput,
  MismatchedUniverse,
  // search
  PoolTooSmall,
  // benchmark ingestion / CLI
  IoError,
  MalformedRecord,
  InvalidArch,
  AccuracyOutOfRange,
  UnknownDataset,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-checkable kind alongside the message.
/// CLI maps these to exit code 1 (input errors); anything else is a 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace nasgraph
