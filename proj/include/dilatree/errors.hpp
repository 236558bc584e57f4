#pragma once

#include <stdexcept>
#include <string>

namespace dilatree {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad indices, duplicate points, a non-tree edge list, ...
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A certified comparison could not be decided before the precision cap.
class PrecisionExhausted : public Error {
 public:
  PrecisionExhausted(const std::string& what, int bits) : Error(what), bits_(bits) {}
  int bits() const noexcept { return bits_; }

 private:
  int bits_;
};

class NoIntersection : public Error {
 public:
  using Error::Error;
};

class SizeTooLarge : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class NotCrossing : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class PrecisionInsufficient : public Error {
 public:
  using Error::Error;
};

class SumTooLarge : public Error {
 public:
  using Error::Error;
};

/// Unreadable or unwritable files, malformed file contents.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dilatree
