#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "newton/runtime.hpp"

namespace newton {

class SampleFormatError : public std::runtime_error {
 public:
  SampleFormatError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One JSON object per line: keys are binding names, values numbers, and the
/// optional key "t" is the timestamp. Blank lines are skipped.
std::vector<SampleRecord> read_samples_jsonl(std::istream& in);

/// Header row of binding names (a "t" column is the timestamp), then one
/// record per row. An empty cell leaves that name unbound.
std::vector<SampleRecord> read_samples_csv(std::istream& in);

/// Picks CSV for a `.csv` extension and JSON-lines otherwise. Throws
/// std::runtime_error if the file cannot be opened.
std::vector<SampleRecord> read_samples_file(const std::string& path);

/// `{"invariant":..., "pass":..., "relations":[{index, pass, lhs, rhs, residual}]}`
/// on one line. Failed evaluations carry a "reason" and null values.
std::string to_json_line(const CheckResult& r);

}  // namespace newton
