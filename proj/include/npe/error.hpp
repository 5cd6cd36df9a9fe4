#pragma once

#include <stdexcept>
#include <string>

namespace npe {

// Numeric values double as process exit codes for the CLI and status codes
// for the C API.
enum class ErrorCode : int {
  kConfiguration = 2,
  kInvariant = 3,
  kCertification = 4,
  kBlowUp = 5,
  kQuadrature = 6,
  kEnvelope = 7,
  kDomain = 8,
  kIo = 9,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when the closed-form denominator reaches zero before the requested
/// time. The blow-up instant lies in [t_lower, t_upper].
class BlowUpError : public Error {
 public:
  BlowUpError(double t_lower, double t_upper, const std::string& what)
      : Error(ErrorCode::kBlowUp, what), t_lower_(t_lower), t_upper_(t_upper) {}

  double t_lower() const noexcept { return t_lower_; }
  double t_upper() const noexcept { return t_upper_; }

 private:
  double t_lower_;
  double t_upper_;
};

}  // namespace npe
