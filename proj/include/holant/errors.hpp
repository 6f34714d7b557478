#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace holant {

enum class ErrorKind { Input, Budget, Numeric, Precondition };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string name, const std::string& msg)
      : std::runtime_error(name + ": " + msg), kind_(kind), name_(std::move(name)) {}
  ErrorKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  ErrorKind kind_;
  std::string name_;
};

#define HOLANT_ERROR(Name, Kind)                                   \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& msg) : Error(Kind, #Name, msg) {} \
  };

HOLANT_ERROR(DivisionByZero, ErrorKind::Numeric)
HOLANT_ERROR(NumericOverflow, ErrorKind::Numeric)
HOLANT_ERROR(SingularMatrix, ErrorKind::Numeric)
HOLANT_ERROR(ZeroVector, ErrorKind::Numeric)
HOLANT_ERROR(ParameterDegenerate, ErrorKind::Numeric)
HOLANT_ERROR(ArityMismatch, ErrorKind::Input)
HOLANT_ERROR(InvalidPermutation, ErrorKind::Input)
HOLANT_ERROR(IndexOutOfRange, ErrorKind::Input)
HOLANT_ERROR(ValidationError, ErrorKind::Input)
HOLANT_ERROR(UnusedVariable, ErrorKind::Input)
HOLANT_ERROR(NotBipartite, ErrorKind::Input)
HOLANT_ERROR(ArityTooLarge, ErrorKind::Budget)
HOLANT_ERROR(BudgetExceeded, ErrorKind::Budget)
HOLANT_ERROR(CapExceeded, ErrorKind::Budget)
HOLANT_ERROR(DegreeTooLarge, ErrorKind::Budget)
HOLANT_ERROR(FamilyViolation, ErrorKind::Precondition)
HOLANT_ERROR(LabelViolation, ErrorKind::Precondition)
HOLANT_ERROR(DegenerateInput, ErrorKind::Precondition)
HOLANT_ERROR(PreconditionViolated, ErrorKind::Precondition)
HOLANT_ERROR(RuleInapplicable, ErrorKind::Precondition)

#undef HOLANT_ERROR

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : Error(ErrorKind::Input, "ParseError", msg + " at position " + std::to_string(pos)),
        pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

}  // namespace holant
