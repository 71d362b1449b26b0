#pragma once

#include <stdexcept>
#include <string>

namespace manet {

/// Base class for all errors raised by the library.
struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Kernel errors.
struct SchedulingInPast : SimError {
  using SimError::SimError;
};
struct CancelError : SimError {
  using SimError::SimError;
};

// Key management errors.
struct DuplicateNode : SimError {
  using SimError::SimError;
};
struct DuplicateSigner : SimError {
  using SimError::SimError;
};

// Trust engine errors.
struct SelfTrust : SimError {
  using SimError::SimError;
};
struct SelfReport : SimError {
  using SimError::SimError;
};
struct ScoreOutOfRange : SimError {
  using SimError::SimError;
};
struct BadWeights : SimError {
  using SimError::SimError;
};

// Scenario errors. ParseError covers malformed input (bad JSON, wrong
// types, unknown keys); ValidationError covers well-formed input with
// inconsistent contents (out-of-area regions, bad node refs, ...).
struct ParseError : SimError {
  using SimError::SimError;
};
struct ValidationError : SimError {
  using SimError::SimError;
};

}  // namespace manet
