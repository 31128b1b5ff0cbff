#pragma once

#include <stdexcept>
#include <string>

namespace dyadfrac {

/// Process exit codes shared by the CLI and the report runner.
enum class ExitCode : int {
  kOk = 0,
  kVerificationFailure = 1,
  kUsage = 2,
  kBudget = 3,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual ExitCode code() const = 0;
};

class UsageError : public Error {
 public:
  using Error::Error;
  ExitCode code() const override { return ExitCode::kUsage; }
};

/// A construction could not satisfy one of its defining inequalities.
class ConstraintError : public Error {
 public:
  using Error::Error;
  ExitCode code() const override { return ExitCode::kUsage; }
};

class BudgetError : public Error {
 public:
  using Error::Error;
  ExitCode code() const override { return ExitCode::kBudget; }
};

/// A certificate that must hold by construction did not.
class VerificationError : public Error {
 public:
  using Error::Error;
  ExitCode code() const override { return ExitCode::kVerificationFailure; }
};

}  // namespace dyadfrac
