#pragma once

#include <stdexcept>
#include <string>

namespace angelesco {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// quadrature ran out of subdivisions before reaching the requested tolerance
class NonConvergence : public Error {
public:
  using Error::Error;
};

class SingularEndpoint : public Error {
public:
  using Error::Error;
};

// Psi evaluated exactly on one of its jump rays
class OnContour : public Error {
public:
  using Error::Error;
};

class CoincidentPoints : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class UndefinedDerivativeAtZero : public Error {
public:
  using Error::Error;
};

class NearSingularDenominator : public Error {
public:
  using Error::Error;
};

class PrecisionInsufficient : public Error {
public:
  using Error::Error;
};

} // namespace angelesco
