#pragma once

#include <stdexcept>
#include <string>

namespace bpws {

enum class ErrorKind {
  MalformedDocument,
  UnresolvedReference,
  InvariantViolation,
  MalformedLine,
  InvalidIri,
  MissingAnnotation,
  DuplicateServiceId,
  ArityTooLarge,
  UnsupportedBehavior,
  UnboundActivity,
  UnknownActivity,
  AlreadyBound,
  NoCandidate,
  IoError,
};

const char* to_string(ErrorKind k);

/// Every error carries a location path (element path, file name, or line number).
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string location, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + " at " + location + ": " + message),
        kind_(kind),
        location_(std::move(location)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& location() const { return location_; }

private:
  ErrorKind kind_;
  std::string location_;
};

}  // namespace bpws
