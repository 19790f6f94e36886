#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "newton/samples.hpp"

namespace newton {
namespace {

TEST(Samples, JsonLines) {
  std::istringstream in("{\"L\": 9.8, \"period\": 6.28, \"t\": 1.5}\n\n{\"L\": 2}\n");
  const auto recs = read_samples_jsonl(in);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_DOUBLE_EQ(recs[0].values.at("L"), 9.8);
  EXPECT_DOUBLE_EQ(recs[0].values.at("period"), 6.28);
  EXPECT_EQ(recs[0].values.count("t"), 0u);
  EXPECT_EQ(recs[0].timestamp, 1.5);
  EXPECT_FALSE(recs[1].timestamp.has_value());
  EXPECT_DOUBLE_EQ(recs[1].values.at("L"), 2.0);
}

TEST(Samples, JsonLinesErrors) {
  {
    std::istringstream in("{\"L\": 1}\n[1, 2]\n");
    try {
      read_samples_jsonl(in);
      FAIL() << "expected SampleFormatError";
    } catch (const SampleFormatError& e) {
      EXPECT_EQ(e.line(), 2u);
    }
  }
  {
    std::istringstream in("{\"L\": \"x\"}\n");
    EXPECT_THROW(read_samples_jsonl(in), SampleFormatError);
  }
  {
    std::istringstream in("{not json\n");
    EXPECT_THROW(read_samples_jsonl(in), SampleFormatError);
  }
}

TEST(Samples, Csv) {
  std::istringstream in("t,L,period\n0,9.8,6.28\n1,2.45,\n");
  const auto recs = read_samples_csv(in);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].timestamp, 0.0);
  EXPECT_DOUBLE_EQ(recs[0].values.at("period"), 6.28);
  EXPECT_EQ(recs[1].values.count("period"), 0u);
  EXPECT_DOUBLE_EQ(recs[1].values.at("L"), 2.45);
}

TEST(Samples, CsvErrors) {
  {
    std::istringstream in("L,period\n1,2,3\n");
    EXPECT_THROW(read_samples_csv(in), SampleFormatError);
  }
  {
    std::istringstream in("L,period\n1,abc\n");
    EXPECT_THROW(read_samples_csv(in), SampleFormatError);
  }
}

TEST(Samples, ResultLine) {
  CheckResult r;
  r.invariant = "pendulum";
  r.pass = false;
  r.relations.push_back({0, false, 7.5, 6.28, (7.5 - 6.28) / 7.5, ""});
  const auto j = nlohmann::json::parse(to_json_line(r));
  EXPECT_EQ(j["invariant"], "pendulum");
  EXPECT_EQ(j["pass"], false);
  ASSERT_EQ(j["relations"].size(), 1u);
  EXPECT_EQ(j["relations"][0]["index"], 0);
  EXPECT_EQ(j["relations"][0]["lhs"], 7.5);
  EXPECT_EQ(j["relations"][0]["rhs"], 6.28);
  EXPECT_FALSE(j["relations"][0].contains("reason"));
  EXPECT_EQ(to_json_line(r).find('\n'), std::string::npos);
}

}  // namespace
}  // namespace newton
