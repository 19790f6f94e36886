#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "newton/compiler.hpp"

namespace newton::testing {

inline std::string fixture_path(const std::string& name) { return std::string(NEWTON_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Compiles `text`; throws with the formatted diagnostics if it fails.
inline NewtonIR compile_or_throw(const std::string& text, const std::string& file = "<test>") {
  auto result = compile(text, file);
  if (!result.ok()) {
    std::string msg = "compile failed:";
    for (const auto& d : result.diagnostics) msg += "\n  " + format(d);
    throw std::runtime_error(msg);
  }
  return std::move(*result.ir);
}

inline NewtonIR pendulum_ir() { return compile_or_throw(read_fixture("pendulum.newton"), "pendulum.newton"); }

}  // namespace newton::testing
