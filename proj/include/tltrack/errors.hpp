#pragma once

#include <stdexcept>
#include <string>

namespace tlt {

/**
 * Coarse error classes. InvalidInput covers everything a caller handed us
 * (syntax, fragment, dimension, config); the rest are runtime conditions.
 */
enum class ErrorCode {
  InvalidInput,
  SafetyDomain,
  StateCapExceeded,
  NoAcceptingPath,
  Decomposition,
  Integration,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline Error input_error(const std::string& what) { return Error(ErrorCode::InvalidInput, what); }
inline Error domain_error(const std::string& what) { return Error(ErrorCode::SafetyDomain, what); }

}  // namespace tlt
