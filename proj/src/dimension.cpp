#include "newton/dimension.hpp"

namespace newton {

DimensionSignature DimensionSignature::base(BaseSignalId id) {
  const std::pair<BaseSignalId, Rational> term{id, Rational(1)};
  return from_terms(std::span(&term, 1));
}

DimensionSignature DimensionSignature::from_terms(
    std::span<const std::pair<BaseSignalId, Rational>> terms) {
  DimensionSignature d;
  for (const auto& [id, e] : terms) {
    auto [it, inserted] = d.terms_.try_emplace(id, e);
    if (!inserted) it->second += e;
    if (it->second.is_zero()) d.terms_.erase(it);
  }
  return d;
}

Rational DimensionSignature::exponent(BaseSignalId id) const {
  const auto it = terms_.find(id);
  return it == terms_.end() ? Rational(0) : it->second;
}

DimensionSignature dim_mul(const DimensionSignature& a, const DimensionSignature& b) {
  DimensionSignature out = a;
  for (const auto& [id, e] : b.terms_) {
    auto [it, inserted] = out.terms_.try_emplace(id, e);
    if (!inserted) {
      it->second += e;
      if (it->second.is_zero()) out.terms_.erase(it);
    }
  }
  return out;
}

DimensionSignature dim_pow(const DimensionSignature& a, const Rational& e) {
  DimensionSignature out;
  if (e.is_zero()) return out;
  for (const auto& [id, x] : a.terms_) out.terms_.emplace(id, x * e);
  return out;
}

DimensionSignature dim_div(const DimensionSignature& a, const DimensionSignature& b) {
  return dim_mul(a, dim_pow(b, Rational(-1)));
}

bool dim_is_dimensionless(const DimensionSignature& a) { return a.empty(); }

std::string to_string(const DimensionSignature& d, std::span<const std::string> base_names) {
  std::string out = "{";
  bool first = true;
  for (const auto& [id, e] : d.terms()) {
    if (!first) out += ", ";
    first = false;
    if (id.value < base_names.size()) {
      out += base_names[id.value];
    } else {
      out += "#" + std::to_string(id.value);
    }
    out += ":" + e.str();
  }
  return out + "}";
}

}  // namespace newton
