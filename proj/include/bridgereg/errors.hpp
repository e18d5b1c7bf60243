#pragma once

#include <stdexcept>
#include <string>

namespace bridgereg {

enum class ErrorCode {
  kDimension,
  kConfig,
  kSingular,
  kSolver,
  kBudget,
  kIo,
  kPlot,
};

/// Base of every exception thrown by the library. The C API maps `code()`
/// onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error(ErrorCode::kDimension, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCode::kConfig, what) {}
};

class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what)
      : Error(ErrorCode::kSingular, what) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what)
      : Error(ErrorCode::kSolver, what) {}
};

/// Raised by the grid oracle when the lattice would exceed its budget.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what)
      : Error(ErrorCode::kBudget, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

class PlotError : public Error {
 public:
  explicit PlotError(const std::string& what)
      : Error(ErrorCode::kPlot, what) {}
};

}  // namespace bridgereg
