#ifndef GKDV_ERRORS_HPP
#define GKDV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gkdv {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A field contains NaN/Inf or an internal invariant was violated.
class CorruptedStateError : public Error {
 public:
  explicit CorruptedStateError(const std::string& msg) : Error(msg) {}
};

/// Data does not fit the periodic box (decay condition violated).
class DomainOverflowError : public Error {
 public:
  explicit DomainOverflowError(const std::string& msg) : Error(msg) {}
};

/// An operation was called outside its contract.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& msg) : Error(msg) {}
};

/// Invalid configuration or experiment spec.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace gkdv

#endif
