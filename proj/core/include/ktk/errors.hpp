#pragma once

#include <stdexcept>
#include <string>

namespace ktk {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularError : public Error {
 public:
  SingularError() : Error("matrix is singular") {}
};

class NoSolution : public Error {
 public:
  NoSolution() : Error("linear system has no solution") {}
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class DecodeFailure : public Error {
 public:
  DecodeFailure() : Error("no codeword within the decoding radius") {}
};

/// Carries the name of the violated parameter constraint.
class ParamError : public Error {
 public:
  ParamError(std::string constraint, const std::string& what)
      : Error(what), constraint_(std::move(constraint)) {}
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

class DecryptError : public Error {
 public:
  enum class Kind { Decode, Weight, Inconsistent };
  DecryptError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class RankMismatch : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated on-disk artifact.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace ktk
