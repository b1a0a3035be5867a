#include "exactbs/io.hpp"

#include <sstream>

#include <gtest/gtest.h>

#include "exactbs/linalg.hpp"
#include "test_support.hpp"

namespace exactbs {
namespace {

using nlohmann::json;

TEST(MatrixJson, RoundTripIsBitExact) {
  Rng rng(1);
  for (int trial = 0; trial < 25; ++trial) {
    const auto rows = static_cast<Eigen::Index>(1 + rng.below(9));
    const auto cols = static_cast<Eigen::Index>(1 + rng.below(9));
    ComplexMatrix a = testing::random_complex(rows, cols, 100 + trial);
    a(0, 0) *= 1e-300;
    std::stringstream buf;
    write_matrix(buf, a, {{"trial", trial}});
    EXPECT_EQ(read_matrix(buf), a);
  }
}

TEST(MatrixJson, MetaIsOptional) {
  const ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  EXPECT_FALSE(matrix_to_json(a).contains("meta"));
  EXPECT_EQ(matrix_to_json(a, {{"seed", 3}})["meta"]["seed"], 3);
  EXPECT_EQ(matrix_from_json(matrix_to_json(a, {{"seed", 3}})), a);
}

TEST(MatrixJson, RejectsMalformedDocuments) {
  const auto bad = [](const std::string& text) {
    std::stringstream in(text);
    return read_matrix(in);
  };
  EXPECT_THROW(bad("not json"), InputError);
  EXPECT_THROW(bad(R"({"rows": 1, "cols": 1})"), InputError);
  EXPECT_THROW(bad(R"({"rows": -1, "cols": 1, "data": []})"), InputError);
  EXPECT_THROW(bad(R"({"rows": 1, "cols": 2, "data": [[1, 0]]})"), InputError);
  EXPECT_THROW(bad(R"({"rows": 1, "cols": 1, "data": [[1]]})"), InputError);
  EXPECT_THROW(bad(R"({"rows": 1, "cols": 1, "data": [["1", 0]]})"), InputError);
  EXPECT_THROW(bad(R"({"rows": 1, "cols": 1, "data": 5})"), InputError);
  EXPECT_THROW(read_matrix_file("/nonexistent/matrix.json"), InputError);
}

TEST(TableCsv, RoundTrip) {
  const OutcomeTable table = exact_table(testing::load_fixture("haar_5x3.json"));
  std::stringstream buf;
  write_table_csv(buf, table);
  std::string header;
  std::getline(std::stringstream(buf.str()), header);
  EXPECT_EQ(header, "z_1,z_2,z_3,probability");
  const OutcomeTable back = read_table_csv(buf, 5);
  EXPECT_EQ(back.n, 3);
  ASSERT_EQ(back.outcomes.size(), table.outcomes.size());
  for (std::size_t i = 0; i < table.outcomes.size(); ++i) {
    EXPECT_EQ(back.outcomes[i].z, table.outcomes[i].z);
    EXPECT_EQ(back.outcomes[i].probability, table.outcomes[i].probability);
  }
}

TEST(TableCsv, RejectsMalformed) {
  const auto bad = [](const std::string& text) {
    std::stringstream in(text);
    return read_table_csv(in, 3);
  };
  EXPECT_THROW(bad(""), InputError);
  EXPECT_THROW(bad("z_1,z_2\n1,2\n"), InputError);
  EXPECT_THROW(bad("z_1,probability\n1,0.5,3\n"), InputError);
  EXPECT_THROW(bad("z_1,probability\n4,0.5\n"), InputError);
  EXPECT_THROW(bad("z_1,probability\n1,-0.5\n"), InputError);
  EXPECT_THROW(bad("z_1,probability\n1,abc\n"), InputError);
  EXPECT_THROW(bad("z_1,probability\n1,0.5\n1,0.5\n"), InputError);
  EXPECT_EQ(bad("z_1,probability\n2,0.5\n\n1,0.5\n").outcomes.front().z.vec(), std::vector<int>{1});
}

std::vector<SampleRecord> some_records() {
  const ComplexMatrix a = testing::load_fixture("haar_5x3.json");
  std::vector<SampleRecord> recs = sample_B_batch(a, 20, 9);
  Rng rng(2);
  recs.push_back(sample_collision_free(a, rng, 100));
  recs.push_back(sample_brute(a, rng));
  return recs;
}

TEST(Samples, JsonlRoundTrip) {
  const auto recs = some_records();
  std::stringstream buf;
  SampleWriter writer(buf, SampleFormat::jsonl);
  for (const auto& r : recs) writer.write(r);

  const json first = json::parse(buf.str().substr(0, buf.str().find('\n')));
  EXPECT_TRUE(first.contains("z"));
  EXPECT_TRUE(first.contains("prob"));
  EXPECT_TRUE(first.contains("alpha"));
  EXPECT_EQ(first["sampler"], "B");

  const auto back = read_samples(buf, SampleFormat::jsonl, 5);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].z, recs[i].z);
    EXPECT_EQ(back[i].probability, recs[i].probability);
    EXPECT_EQ(back[i].alpha, recs[i].alpha);
    EXPECT_EQ(back[i].sampler, recs[i].sampler);
    EXPECT_EQ(back[i].rejections, recs[i].rejections);
  }
}

TEST(Samples, CsvRoundTrip) {
  auto recs = some_records();
  recs[3].probability.reset();
  std::stringstream buf;
  SampleWriter writer(buf, SampleFormat::csv);
  for (const auto& r : recs) writer.write(r);
  EXPECT_EQ(buf.str().substr(0, buf.str().find('\n')), "z_1,z_2,z_3,prob");
  const auto back = read_samples(buf, SampleFormat::csv, 5);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].z, recs[i].z);
    EXPECT_EQ(back[i].probability, recs[i].probability);
  }
}

TEST(Samples, ReadErrors) {
  std::stringstream empty;
  EXPECT_TRUE(read_samples(empty, SampleFormat::csv, 3).empty());
  std::stringstream bad_json(R"({"z": [1, 2]})" "\n" R"({"q": 1})" "\n");
  EXPECT_THROW(read_samples(bad_json, SampleFormat::jsonl, 3), InputError);
  std::stringstream out_of_range(R"({"z": [1, 9]})" "\n");
  EXPECT_THROW(read_samples(out_of_range, SampleFormat::jsonl, 3), InputError);
  std::stringstream short_row("z_1,z_2,prob\n1,0.2\n");
  EXPECT_THROW(read_samples(short_row, SampleFormat::csv, 3), InputError);
}

TEST(Samples, FormatNames) {
  EXPECT_EQ(parse_sample_format("json"), SampleFormat::jsonl);
  EXPECT_EQ(parse_sample_format("jsonl"), SampleFormat::jsonl);
  EXPECT_EQ(parse_sample_format("csv"), SampleFormat::csv);
  EXPECT_THROW(parse_sample_format("xml"), InputError);
  EXPECT_EQ(sample_format_for_path("out.csv"), SampleFormat::csv);
  EXPECT_EQ(sample_format_for_path("out.jsonl"), SampleFormat::jsonl);
}

TEST(Reports, JsonFields) {
  TestReport r;
  r.statistic = 3.5;
  r.dof = 4;
  r.verdict = Verdict::fail;
  const json j = to_json(r);
  EXPECT_EQ(j["dof"], 4);
  EXPECT_EQ(j["verdict"], "fail");
  CollisionAudit audit;
  audit.samples = 10;
  audit.bound = {1.3, 1.0};
  const json k = to_json(audit);
  EXPECT_EQ(k["bound_raw"], 1.3);
  EXPECT_EQ(k["bound"], 1.0);
  EXPECT_EQ(k["verdict"], "pass");
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  const double x = 0.06438727360396149;
  EXPECT_EQ(std::stod(format_double(x)), x);
}

}  // namespace
}  // namespace exactbs
