#pragma once

#include <stdexcept>
#include <string>

namespace signforge {

/// Base class for all recoverable toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Tensor or layer shape disagreement. The message names the offending axis.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid scalar parameter (temperature <= 0, epsilon <= 0, ...).
class ParamError : public Error {
 public:
  using Error::Error;
};

/// Empty or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failure (missing file, short write, ...).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Structured failure while decoding a binary container.
class FormatError : public Error {
 public:
  enum class Kind { BadMagic, BadVersion, Truncated, ShapeMismatch, Corrupt };

  FormatError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Test-split data leaking into a training pass.
class HygieneError : public Error {
 public:
  using Error::Error;
};

/// Run-manifest missing, corrupt, or inconsistent with its artifacts.
class ManifestError : public Error {
 public:
  using Error::Error;
};

/// Bad experiment configuration. The message carries the field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace signforge
