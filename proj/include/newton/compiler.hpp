#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "newton/ir.hpp"
#include "newton/source.hpp"

namespace newton {

struct SourceFile {
  std::string name;
  std::string text;
};

struct CompileResult {
  std::optional<NewtonIR> ir;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return ir.has_value(); }
};

/// Lexes and parses every file, concatenates their declarations in order
/// and runs semantic analysis. Semantic analysis is skipped when any file
/// has lexical or syntax errors.
CompileResult compile(std::span<const SourceFile> files);
CompileResult compile(const std::string& text, const std::string& file_name = "<input>");

}  // namespace newton
