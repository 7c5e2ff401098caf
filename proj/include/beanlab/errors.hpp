#pragma once

#include <stdexcept>
#include <string>

namespace beanlab {

/// Root of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Caller-supplied data violates a precondition (bad label, too few samples, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or out-of-range configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents (bad magic number, unparsable manifest).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// File payload shorter or longer than its header promises.
class LengthError : public Error {
 public:
  using Error::Error;
};

/// A decoded value lies outside its legal range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure (missing file, unwritable directory).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint written by an incompatible format version.
class VersionError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace beanlab
