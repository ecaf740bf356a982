#pragma once

#include <stdexcept>
#include <string>

namespace mitt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad inputs: malformed files, invalid configuration, violated invariants.
/// The CLI maps these to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, long line)
      : ValidationError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ParseError(const std::string& what) : ValidationError(what), line_(-1) {}
  long line() const { return line_; }

 private:
  long line_;
};

class MissingJustificationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Stratum membership cannot be read off observed data; counterfactual
/// views exist only in simulation mode.
class CounterfactualUnavailableError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The requested quantity is undefined on the given sample or configuration
/// (not a usage mistake). The CLI maps these to exit code 2.
class UndefinedError : public Error {
 public:
  using Error::Error;
};

class NoInitiatorsError : public UndefinedError {
 public:
  explicit NoInitiatorsError(const std::string& arm_name)
      : UndefinedError("no initiated participants in " + arm_name +
                       " arm; the mITT estimator is undefined on this sample"),
        arm_name_(arm_name) {}
  const std::string& arm_name() const { return arm_name_; }

 private:
  std::string arm_name_;
};

class EmptyArmError : public UndefinedError {
 public:
  explicit EmptyArmError(const std::string& arm_name)
      : UndefinedError("no participants in " + arm_name + " arm"), arm_name_(arm_name) {}
  const std::string& arm_name() const { return arm_name_; }

 private:
  std::string arm_name_;
};

class UndefinedEstimandError : public UndefinedError {
 public:
  using UndefinedError::UndefinedError;
};

class UndefinedLimitError : public UndefinedError {
 public:
  explicit UndefinedLimitError(const std::string& arm_name)
      : UndefinedError("the large-sample mITT analysis population for the " + arm_name +
                       " arm has zero mass"),
        arm_name_(arm_name) {}
  const std::string& arm_name() const { return arm_name_; }

 private:
  std::string arm_name_;
};

class AllUndefinedError : public UndefinedError {
 public:
  using UndefinedError::UndefinedError;
};

}  // namespace mitt
