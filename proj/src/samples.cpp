#include "newton/samples.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

#include "newton/interchange.hpp"

namespace newton {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::vector<SampleRecord> read_samples_jsonl(std::istream& in) {
  std::vector<SampleRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw SampleFormatError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw SampleFormatError(line_no, "record is not a JSON object");
    SampleRecord rec;
    for (const auto& [key, value] : obj.items()) {
      if (!value.is_number()) throw SampleFormatError(line_no, "value of '" + key + "' is not a number");
      if (key == "t") {
        rec.timestamp = value.get<double>();
      } else {
        rec.values.emplace(key, value.get<double>());
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SampleRecord> read_samples_csv(std::istream& in) {
  std::vector<SampleRecord> records;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv(line);
    if (header.empty()) {
      for (const auto& c : cells) {
        if (c.empty()) throw SampleFormatError(line_no, "empty column name in header");
      }
      header = std::move(cells);
      continue;
    }
    if (cells.size() != header.size()) {
      throw SampleFormatError(line_no, "expected " + std::to_string(header.size()) + " cells, found " +
                                           std::to_string(cells.size()));
    }
    SampleRecord rec;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].empty()) continue;
      double v = 0.0;
      const char* first = cells[i].data();
      const char* last = first + cells[i].size();
      if (*first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) {
        throw SampleFormatError(line_no, "'" + cells[i] + "' in column '" + header[i] + "' is not a number");
      }
      if (header[i] == "t") {
        rec.timestamp = v;
      } else {
        rec.values.emplace(header[i], v);
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SampleRecord> read_samples_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  return csv ? read_samples_csv(in) : read_samples_jsonl(in);
}

std::string to_json_line(const CheckResult& r) { return to_json(r).dump(); }

}  // namespace newton
