#pragma once

#include <stdexcept>
#include <string>

namespace sod {

enum class ErrorKind {
  DuplicateId,
  DanglingReference,
  CycleInHierarchy,
  CycleInActivities,
  UnknownRole,
  UnknownUser,
  UnknownPermission,
  UnknownSession,
  UnknownActivity,
  UnknownGrouping,
  UnknownParent,
  UnknownDomain,
  InactiveRoleNotAssigned,
  InvalidConstraint,
  InstanceTooLarge,
  InconsistentParams,
};

/// Exception carrying a machine-readable kind next to the human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// A parser or validation message anchored to a source position.
/// Column is 1-based; 0 means "whole line".
struct Diagnostic {
  int line = 0;
  int col = 0;
  std::string message;
};

}  // namespace sod
