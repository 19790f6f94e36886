#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "newton/rational.hpp"

namespace newton {

/// Ordinal of a fundamental signal, assigned densely in declaration order.
struct BaseSignalId {
  std::uint32_t value = 0;
  friend auto operator<=>(const BaseSignalId&, const BaseSignalId&) = default;
};

/// Exponent vector of a physical quantity over the fundamental signals.
///
/// Stored sparsely; an exponent of zero is never stored, so two signatures
/// are equal exactly when their term maps are equal. The empty signature is
/// the dimensionless one and the identity of `dim_mul`.
class DimensionSignature {
 public:
  using Terms = std::map<BaseSignalId, Rational>;

  DimensionSignature() = default;

  static DimensionSignature base(BaseSignalId id);
  /// Builds a signature from arbitrary (base, exponent) pairs. Repeated
  /// bases are summed and zero results dropped.
  static DimensionSignature from_terms(std::span<const std::pair<BaseSignalId, Rational>> terms);

  Rational exponent(BaseSignalId id) const;
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  friend bool operator==(const DimensionSignature&, const DimensionSignature&) = default;

 private:
  friend DimensionSignature dim_mul(const DimensionSignature&, const DimensionSignature&);
  friend DimensionSignature dim_pow(const DimensionSignature&, const Rational&);

  Terms terms_;
};

DimensionSignature dim_mul(const DimensionSignature& a, const DimensionSignature& b);
DimensionSignature dim_pow(const DimensionSignature& a, const Rational& e);
DimensionSignature dim_div(const DimensionSignature& a, const DimensionSignature& b);
bool dim_is_dimensionless(const DimensionSignature& a);

/// Renders `{length:1, time:-2}` using `base_names[id]` for each base.
/// Unknown ids print as `#<id>`.
std::string to_string(const DimensionSignature& d, std::span<const std::string> base_names);

}  // namespace newton
