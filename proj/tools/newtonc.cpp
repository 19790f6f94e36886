// newtonc: command-line driver for Newton specifications.
//
//   newtonc [--stdlib] check   SPEC [--json]
//   newtonc [--stdlib] pi      SPEC INVARIANT [--no-constants] [--json]
//   newtonc [--stdlib] eval    SPEC INVARIANT SAMPLES [--rel-tol X] [--abs-tol X]
//   newtonc [--stdlib] emit-ir SPEC [-o PATH|-] [--json]
//   newtonc [--stdlib] info    SPEC INVARIANT [--json]
//
// Exit status: 0 success, 1 specification errors / failed checks / unknown
// invariant, 2 I/O failures and malformed input files.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "newton/compiler.hpp"
#include "newton/interchange.hpp"
#include "newton/pi_analysis.hpp"
#include "newton/runtime.hpp"
#include "newton/samples.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kIoError = 2;

struct Options {
  bool stdlib = false;
  bool json = false;
  bool no_constants = false;
  std::string spec;
  std::string invariant;
  std::string samples;
  std::string output = "-";
  newton::ToleranceConfig tol;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stdlib_path() {
  if (const char* env = std::getenv("NEWTON_STDLIB"); env && *env) return env;
  return NEWTON_STDLIB_PATH;
}

// Compiles the spec (with the standard definitions first if requested) and
// prints diagnostics to stderr.
std::optional<newton::NewtonIR> load_spec(const Options& opt, std::vector<newton::Diagnostic>* diagnostics = nullptr) {
  std::vector<newton::SourceFile> files;
  if (opt.stdlib) {
    const auto path = stdlib_path();
    files.push_back({path, read_file(path)});
  }
  files.push_back({opt.spec, read_file(opt.spec)});
  auto result = newton::compile(files);
  for (const auto& d : result.diagnostics) std::cerr << newton::format(d) << "\n";
  if (diagnostics) *diagnostics = result.diagnostics;
  return std::move(result.ir);
}

int cmd_check(const Options& opt) {
  std::vector<newton::Diagnostic> diagnostics;
  const auto ir = load_spec(opt, &diagnostics);
  if (opt.json) {
    nlohmann::json out{{"ok", ir.has_value()}};
    if (!ir) {
      out["diagnostics"] = nlohmann::json::array();
      for (const auto& d : diagnostics) {
        out["diagnostics"].push_back({{"file", d.span.file},
                                      {"line", d.span.line_start},
                                      {"column", d.span.col_start},
                                      {"kind", newton::to_string(d.kind)},
                                      {"message", d.message}});
      }
    }
    if (ir) {
      out["signals"] = ir->signals.size();
      out["constants"] = ir->constants.size();
      out["invariants"] = ir->invariants.size();
    }
    std::cout << out.dump() << "\n";
  } else if (ir) {
    std::cout << "OK: " << ir->signals.size() << " signals, " << ir->constants.size() << " constants, "
              << ir->invariants.size() << " invariants\n";
  }
  return ir ? kOk : kFailed;
}

const newton::InvariantDef* find_or_report(const newton::NewtonIR& ir, const std::string& name) {
  const auto* inv = ir.find_invariant(name);
  if (!inv) std::cerr << "newtonc: unknown invariant '" << name << "'\n";
  return inv;
}

int cmd_pi(const Options& opt) {
  const auto ir = load_spec(opt);
  if (!ir) return kFailed;
  const auto* inv = find_or_report(*ir, opt.invariant);
  if (!inv) return kFailed;
  const auto m = newton::dimension_matrix(*inv, !opt.no_constants);
  const auto k = newton::rank(m);
  const auto groups = newton::pi_groups(m);
  if (opt.json) {
    nlohmann::json gs = nlohmann::json::array();
    for (const auto& g : groups) {
      nlohmann::json exps = nlohmann::json::object();
      for (const auto& t : g.terms) exps[t.quantity] = t.exponent.get_si();
      gs.push_back({{"exponents", std::move(exps)}, {"monomial", newton::to_monomial_string(g)}});
    }
    std::cout << nlohmann::json{{"invariant", inv->name},
                                {"n", m.column_count()},
                                {"k", k},
                                {"quantities", m.columns},
                                {"pi_groups", std::move(gs)}}
                     .dump()
              << "\n";
    return kOk;
  }
  std::cout << "n=" << m.column_count() << " k=" << k << "\n";
  for (std::size_t i = 0; i < groups.size(); ++i) {
    std::cout << "pi_" << i << " = " << newton::to_monomial_string(groups[i]) << "\n";
  }
  return kOk;
}

int cmd_eval(const Options& opt) {
  const auto ir = load_spec(opt);
  if (!ir) return kFailed;
  if (!find_or_report(*ir, opt.invariant)) return kFailed;
  std::vector<newton::SampleRecord> records;
  try {
    if (opt.samples == "-") {
      records = newton::read_samples_jsonl(std::cin);
    } else {
      records = newton::read_samples_file(opt.samples);
    }
  } catch (const newton::SampleFormatError& e) {
    std::cerr << opt.samples << ": " << e.what() << "\n";
    return kIoError;
  } catch (const std::runtime_error& e) {
    std::cerr << "newtonc: " << e.what() << "\n";
    return kIoError;
  }
  const auto results = newton::check_stream(*ir, opt.invariant, records, opt.tol);
  std::size_t passed = 0;
  for (const auto& r : results) {
    std::cout << newton::to_json_line(r) << "\n";
    passed += r.pass ? 1 : 0;
  }
  std::cerr << "checked=" << results.size() << " passed=" << passed << " failed=" << results.size() - passed
            << "\n";
  return passed == results.size() ? kOk : kFailed;
}

int cmd_emit_ir(const Options& opt) {
  const auto ir = load_spec(opt);
  if (!ir) return kFailed;
  const auto text = newton::emit_ir(*ir, opt.json ? newton::IrStyle::Compact : newton::IrStyle::Pretty);
  if (opt.output == "-") {
    std::cout << text;
    return kOk;
  }
  std::ofstream out(opt.output, std::ios::binary);
  out << text;
  out.close();
  if (!out) {
    std::cerr << "newtonc: cannot write '" << opt.output << "'\n";
    return kIoError;
  }
  return kOk;
}

int cmd_info(const Options& opt) {
  const auto ir = load_spec(opt);
  if (!ir) return kFailed;
  newton::InvariantInfo info;
  try {
    info = newton::query_invariant(*ir, opt.invariant);
  } catch (const newton::UnknownInvariant& e) {
    std::cerr << "newtonc: " << e.what() << "\n";
    return kFailed;
  }
  if (opt.json) {
    std::cout << newton::to_json(info).dump() << "\n";
    return kOk;
  }
  std::cout << "invariant " << info.name << "\n";
  for (const auto& p : info.params) {
    std::cout << "  param " << p.name << ": " << p.signal;
    if (p.components > 1) std::cout << " (" << p.components << " components)";
    if (p.unit_symbol) std::cout << " [" << *p.unit_symbol << "]";
    std::cout << " {";
    for (std::size_t i = 0; i < p.dimension.size(); ++i) {
      std::cout << (i ? ", " : "") << p.dimension[i].first << ":" << p.dimension[i].second.str();
    }
    std::cout << "}\n";
  }
  std::cout << "  relations: " << info.relation_count << " (";
  for (std::size_t i = 0; i < info.operators.size(); ++i) {
    std::cout << (i ? ", " : "") << newton::ast::to_string(info.operators[i]);
  }
  std::cout << ")\n  n=" << info.quantity_count << " k=" << info.rank << "\n";
  for (std::size_t i = 0; i < info.pi_groups.size(); ++i) {
    std::cout << "  pi_" << i << " = " << newton::to_monomial_string(info.pi_groups[i]) << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Newton specification compiler and invariant checker"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_flag("--stdlib", opt.stdlib, "Prepend the standard signal definitions (NEWTON_STDLIB overrides the file)");

  auto* check = app.add_subcommand("check", "Parse and dimension-check a specification");
  check->add_option("spec", opt.spec, "Newton source file")->required();
  check->add_flag("--json", opt.json, "Machine-readable summary");

  auto* pi = app.add_subcommand("pi", "Derive Buckingham Pi groups for an invariant");
  pi->add_option("spec", opt.spec, "Newton source file")->required();
  pi->add_option("invariant", opt.invariant, "Invariant name")->required();
  pi->add_flag("--no-constants", opt.no_constants, "Leave dimensioned constants out of the analysis");
  pi->add_flag("--json", opt.json, "Print the groups as JSON");

  auto* eval = app.add_subcommand("eval", "Check an invariant against a sample stream");
  eval->add_option("spec", opt.spec, "Newton source file")->required();
  eval->add_option("invariant", opt.invariant, "Invariant name")->required();
  eval->add_option("samples", opt.samples, "JSON-lines or .csv sample file ('-' for JSON-lines on stdin)")
      ->required();
  eval->add_option("--rel-tol", opt.tol.relative, "Relative tolerance for '~'")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  eval->add_option("--abs-tol", opt.tol.absolute, "Absolute floor for '~'")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  eval->add_flag("--json", opt.json, "Accepted for symmetry; results are always JSON-lines");

  auto* emit = app.add_subcommand("emit-ir", "Write the intermediate representation as JSON");
  emit->add_option("spec", opt.spec, "Newton source file")->required();
  emit->add_option("-o,--output", opt.output, "Output path, '-' for stdout")->capture_default_str();
  emit->add_flag("--json", opt.json, "Single-line output instead of the indented canonical form");

  auto* info = app.add_subcommand("info", "Describe an invariant");
  info->add_option("spec", opt.spec, "Newton source file")->required();
  info->add_option("invariant", opt.invariant, "Invariant name")->required();
  info->add_flag("--json", opt.json, "Print the description as JSON");

  try {
    app.parse(argc, argv);
    opt.tol.validate();
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "newtonc: " << e.what() << "\n";
    return kIoError;
  }

  try {
    if (*check) return cmd_check(opt);
    if (*pi) return cmd_pi(opt);
    if (*eval) return cmd_eval(opt);
    if (*emit) return cmd_emit_ir(opt);
    if (*info) return cmd_info(opt);
  } catch (const IoError& e) {
    std::cerr << "newtonc: " << e.what() << "\n";
    return kIoError;
  }
  return kIoError;
}
