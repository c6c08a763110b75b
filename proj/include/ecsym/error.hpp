#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecsym {

enum class ErrorKind {
  InvalidArgument,
  NotBroken,
  OnBoundary,
  Unstable,
  Degenerate,  // zero-frequency (Goldstone) mode, Gaussian vacuum not normalizable
  NotStationary,
  BadPartition,
  OutOfMemoryBudget,
  ConfigError,
  BadDataset,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotBroken: return "NotBroken";
    case ErrorKind::OnBoundary: return "OnBoundary";
    case ErrorKind::Unstable: return "Unstable";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::NotStationary: return "NotStationary";
    case ErrorKind::BadPartition: return "BadPartition";
    case ErrorKind::OutOfMemoryBudget: return "OutOfMemoryBudget";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::BadDataset: return "BadDataset";
  }
  return "Unknown";
}

}  // namespace ecsym
