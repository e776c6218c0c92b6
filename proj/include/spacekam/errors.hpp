#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spacekam {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Machine errors.
class OpenTerm : public Error { using Error::Error; };
class StuckState : public Error { using Error::Error; };
class InvariantViolation : public Error { using Error::Error; };

// Type algebra errors.
class TypeError : public Error { using Error::Error; };
class NotSummable : public Error { using Error::Error; };
class BadSplit : public Error { using Error::Error; };

// Derivation errors.
class InvalidDerivation : public Error { using Error::Error; };
class NotFinal : public Error { using Error::Error; };
class ShapeMismatch : public Error { using Error::Error; };
class IncompleteRun : public Error { using Error::Error; };

class FormatError : public Error { using Error::Error; };

}  // namespace spacekam
