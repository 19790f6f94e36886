#include "newton/compiler.hpp"

#include "newton/parser.hpp"
#include "newton/semantics.hpp"

namespace newton {

CompileResult compile(std::span<const SourceFile> files) {
  CompileResult result;
  std::vector<ast::Decl> decls;
  for (const auto& f : files) {
    ParseResult parsed = parse_source(f.text, f.name);
    result.diagnostics.insert(result.diagnostics.end(), parsed.errors.begin(), parsed.errors.end());
    for (auto& d : parsed.decls) decls.push_back(std::move(d));
  }
  if (!result.diagnostics.empty()) return result;
  AnalysisResult analyzed = analyze(decls);
  result.diagnostics = std::move(analyzed.errors);
  result.ir = std::move(analyzed.ir);
  return result;
}

CompileResult compile(const std::string& text, const std::string& file_name) {
  const SourceFile file{file_name, text};
  return compile(std::span(&file, 1));
}

}  // namespace newton
