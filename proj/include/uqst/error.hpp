#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uqst {

/// Broad failure classes. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
  config,              // malformed or invalid configuration
  range,               // index, mode or region outside its valid domain
  format,              // frame/calibration file is damaged or unsupported
  io,                  // filesystem failure
  numeric,             // statistic undefined for the given data
  missing_calibration, // reconstruct invoked without a vacuum calibration
};

std::string_view category_name(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, const std::string &what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

private:
  ErrorCategory category_;
};

/// Frame file failures. Each reason is reported separately so a truncated
/// transfer is never confused with bit rot.
class FormatError : public Error {
public:
  enum class Reason { bad_magic, version_mismatch, crc_mismatch, truncated, inconsistent };

  FormatError(Reason reason, const std::string &what)
      : Error(ErrorCategory::format, what), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

private:
  Reason reason_;
};

} // namespace uqst
