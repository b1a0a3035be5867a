#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "exactbs/distribution.hpp"
#include "exactbs/sampler.hpp"
#include "exactbs/types.hpp"
#include "exactbs/verify.hpp"

namespace exactbs {

// Matrix files: {"rows": R, "cols": C, "data": [[re, im], ...]} with R*C
// entries in row-major order, plus an optional free-form "meta" object.

nlohmann::json matrix_to_json(const ComplexMatrix& a, const nlohmann::json& meta = nullptr);
/// Validates shape and finiteness; throws InputError.
ComplexMatrix matrix_from_json(const nlohmann::json& doc);

void write_matrix(std::ostream& out, const ComplexMatrix& a, const nlohmann::json& meta = nullptr);
ComplexMatrix read_matrix(std::istream& in);
ComplexMatrix read_matrix_file(const std::string& path);

// Outcome tables: CSV with header z_1,...,z_n,probability.

void write_table_csv(std::ostream& out, const OutcomeTable& table);
OutcomeTable read_table_csv(std::istream& in, int m);

enum class SampleFormat { jsonl, csv };
SampleFormat parse_sample_format(std::string_view text);

/// Streams sample records as JSON lines
/// ({"z": [...], "prob": p, "alpha": [...], "sampler": "B"}) or as CSV
/// (z_1..z_n, prob). The CSV header is written with the first record.
class SampleWriter {
 public:
  SampleWriter(std::ostream& out, SampleFormat format) : out_(out), format_(format) {}
  void write(const SampleRecord& rec);

 private:
  std::ostream& out_;
  SampleFormat format_;
  bool header_written_ = false;
};

/// Reads either format back. `m` bounds the mode indices.
std::vector<SampleRecord> read_samples(std::istream& in, SampleFormat format, int m);

/// Picks the format from a file extension (.csv or anything else -> jsonl).
SampleFormat sample_format_for_path(std::string_view path);

nlohmann::json to_json(const TestReport& report);
nlohmann::json to_json(const CollisionAudit& audit);

/// Shortest text that parses back to the same double.
std::string format_double(double x);

}  // namespace exactbs
