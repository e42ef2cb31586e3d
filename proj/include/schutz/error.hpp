#pragma once

#include <stdexcept>
#include <string>

namespace schutz {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands from two different families reached one oracle.
class FamilyMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A vertex, element, subset or LP budget ran out before the computation closed.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

// A quantity depends on data outside a truncated fragment.
class Censored : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace schutz
