#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hkg {

enum class errc {
  invalid_argument,
  invalid_field,
  field_mismatch,
  div_by_zero,
  illegal_substitution,
  not_normalized,
  wild_root,
  fractional_valuation,
  root_not_in_field,
  wild_exponent,
  no_break,
  not_a_group,
  not_a_uniformizer,
  infinite_gaps,
  no_tame_element,
  dependent_span,
  degree_overflow,
  shape_error,
  not_cyclic,
  bad_order,
  insufficient_precision,
};

constexpr std::string_view errc_name(errc e) {
  switch (e) {
    case errc::invalid_argument: return "InvalidArgument";
    case errc::invalid_field: return "InvalidField";
    case errc::field_mismatch: return "FieldMismatch";
    case errc::div_by_zero: return "DivByZero";
    case errc::illegal_substitution: return "IllegalSubstitution";
    case errc::not_normalized: return "NotNormalized";
    case errc::wild_root: return "WildRoot";
    case errc::fractional_valuation: return "FractionalValuation";
    case errc::root_not_in_field: return "RootNotInField";
    case errc::wild_exponent: return "WildExponent";
    case errc::no_break: return "NoBreak";
    case errc::not_a_group: return "NotAGroup";
    case errc::not_a_uniformizer: return "NotAUniformizer";
    case errc::infinite_gaps: return "InfiniteGaps";
    case errc::no_tame_element: return "NoTameElement";
    case errc::dependent_span: return "DependentSpan";
    case errc::degree_overflow: return "DegreeOverflow";
    case errc::shape_error: return "ShapeError";
    case errc::not_cyclic: return "NotCyclic";
    case errc::bad_order: return "BadOrder";
    case errc::insufficient_precision: return "InsufficientPrecision";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` is stable and is what the
/// CLI reports; the message carries the human-readable detail.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace hkg
