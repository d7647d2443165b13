#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace varkit {

enum class Errc {
  root_has_no_parent,
  invalid_range,
  depth_exceeded,
  invalid_value,
  not_normalized,
  non_dyadic_mass,
  not_comparable,
  invalid_exponent,
  too_large,
  dimension_mismatch,
  singular_point,
  no_certificate,
  depth_insufficient,
  parse_error,
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::root_has_no_parent: return "root-has-no-parent";
    case Errc::invalid_range: return "invalid-range";
    case Errc::depth_exceeded: return "depth-exceeded";
    case Errc::invalid_value: return "invalid-value";
    case Errc::not_normalized: return "not-normalized";
    case Errc::non_dyadic_mass: return "non-dyadic-mass";
    case Errc::not_comparable: return "not-comparable";
    case Errc::invalid_exponent: return "invalid-exponent";
    case Errc::too_large: return "too-large";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::singular_point: return "singular-point";
    case Errc::no_certificate: return "no-certificate";
    case Errc::depth_insufficient: return "depth-insufficient";
    case Errc::parse_error: return "parse-error";
  }
  return "unknown";
}

/// Every precondition failure in the library is reported as a varkit::Error
/// carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace varkit
