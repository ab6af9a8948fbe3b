#pragma once

#include <stdexcept>
#include <string>

namespace ktcy {

/// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// ∫e^F dV differs from the box volume.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

class KrylovStalled : public Error {
 public:
  using Error::Error;
};

class LineSearchFailed : public Error {
 public:
  using Error::Error;
};

/// The Newton iterate left the admissible set u_xx > -1, u_yy+u_tt+u_t > -1.
class EllipticityLost : public Error {
 public:
  using Error::Error;
};

/// The continuation step in τ fell below the configured floor.
class ContinuationStalled : public Error {
 public:
  using Error::Error;
};

/// ma_lhs(u*) ≤ 0 somewhere, so log(ma_lhs) is undefined.
class NonPositiveLHS : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ktcy
