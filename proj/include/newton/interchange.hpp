#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "newton/ir.hpp"
#include "newton/pi_analysis.hpp"
#include "newton/runtime.hpp"

namespace newton {

inline constexpr std::string_view kIrFormatVersion = "1.0";

/// Raised by load_ir. `path` is a JSON Pointer to the offending value.
class LoadError : public std::runtime_error {
 public:
  LoadError(std::string path, const std::string& message)
      : std::runtime_error((path.empty() ? std::string("/") : path) + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class IrStyle { Pretty, Compact };

/// Canonical JSON for `ir`: sorted keys, rationals as "p/q" strings,
/// shortest round-trip reals. Each invariant embeds its relations as
/// prefix-form trees, its dimension matrix and its Pi groups (constants
/// included). Pretty output uses two-space indentation and ends in a
/// newline; compact output is a single line.
std::string emit_ir(const NewtonIR& ir, IrStyle style = IrStyle::Pretty);
nlohmann::json ir_to_json(const NewtonIR& ir);

/// Parses and fully validates an IR document: unknown or missing keys,
/// non-canonical rationals, unresolved names, dimension annotations that
/// disagree with recomputation, and embedded analysis results that differ
/// from a fresh computation are all LoadErrors.
NewtonIR load_ir(std::string_view text);
NewtonIR ir_from_json(const nlohmann::json& doc);

// JSON views shared with the command-line driver.
nlohmann::json to_json(const DimensionSignature& d, const NewtonIR& ir);
nlohmann::json to_json(const TypedExpr& e, const NewtonIR& ir);
nlohmann::json to_json(const DimensionMatrix& m, const NewtonIR& ir);
nlohmann::json to_json(const PiGroup& g, const DimensionMatrix& m);
nlohmann::json to_json(const CheckResult& r);
nlohmann::json to_json(const InvariantInfo& info);

}  // namespace newton
