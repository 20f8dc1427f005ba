#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace n360 {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid configuration value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Precondition of an operation violated by the caller.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Failure reading or validating a project input. `input()` names the input.
class LoadError : public std::runtime_error {
 public:
  LoadError(std::string input, const std::string& what)
      : std::runtime_error(input + ": " + what), input_(std::move(input)) {}

  const std::string& input() const noexcept { return input_; }

 private:
  std::string input_;
};

struct ValidationIssue {
  std::string path;
  std::string message;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues)
      : std::runtime_error(summarize(issues)), issues_(std::move(issues)) {}

  const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

 private:
  static std::string summarize(const std::vector<ValidationIssue>& issues) {
    std::string out = "graph validation failed";
    for (const auto& i : issues) out += "\n  " + i.path + ": " + i.message;
    return out;
  }

  std::vector<ValidationIssue> issues_;
};

class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace n360
