#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsqc {

enum class ErrorKind {
  dimension_mismatch,
  zero_vector,
  not_normalized,
  invalid_measurement,
  impossible_postselection,
  zero_overlap,
  rank_error,
  label_mismatch,
  invalid_config,
  validation_error,
  parse_error,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tsqc
