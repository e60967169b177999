#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace aracne {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Precondition or API-misuse violations (e.g. apply_summary while disabled).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Context file could not be persisted; the loop must stop rather than run
// with unpersisted memory.
class PersistenceError : public Error {
 public:
  using Error::Error;
};

// Provider transport failed, refused past the retry budget, or the scripted
// queue ran dry.
class ProviderError : public Error {
 public:
  using Error::Error;
};

class UnknownRoleError : public Error {
 public:
  using Error::Error;
};

class PlanParseError : public Error {
 public:
  enum class Kind {
    NoObjectFound,
    MissingField,
    WrongType,
    EmptyStepsWhileNotReached,
  };

  PlanParseError(Kind kind, std::string field, const std::string& what)
      : Error(what), kind_(kind), field_(std::move(field)) {}

  Kind kind() const { return kind_; }
  const std::string& field() const { return field_; }

 private:
  Kind kind_;
  std::string field_;
};

class EmptyPlanError : public Error {
 public:
  using Error::Error;
};

class EmptyCommandError : public Error {
 public:
  using Error::Error;
};

class CommandDeniedError : public Error {
 public:
  using Error::Error;
};

// Shell channel errors.
class AuthFailure : public Error {
 public:
  using Error::Error;
};

class ConnectTimeout : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

class SessionClosedError : public Error {
 public:
  using Error::Error;
};

// Scenario / level / log file parse problems, with a line number when known.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, int line = 0) : Error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace aracne
