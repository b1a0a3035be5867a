#include "exactbs/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "exactbs/linalg.hpp"

namespace exactbs {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw InputError(std::string("cannot parse ") + what + " '" + text + "'");
  return value;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

json matrix_to_json(const ComplexMatrix& a, const json& meta) {
  json data = json::array();
  for (Eigen::Index i = 0; i < a.size(); ++i)
    data.push_back({a.data()[i].real(), a.data()[i].imag()});
  json doc = {{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
  if (!meta.is_null()) doc["meta"] = meta;
  return doc;
}

ComplexMatrix matrix_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("rows") || !doc.contains("cols") || !doc.contains("data"))
    throw InputError("matrix file needs rows, cols and data");
  const auto extent_ok = [](const json& v) { return v.is_number_integer() && v.get<std::int64_t>() >= 0; };
  if (!extent_ok(doc["rows"]) || !extent_ok(doc["cols"]))
    throw InputError("matrix rows/cols must be non-negative integers");
  const auto rows = doc["rows"].get<Eigen::Index>();
  const auto cols = doc["cols"].get<Eigen::Index>();
  const json& data = doc["data"];
  if (!data.is_array()) throw InputError("matrix data must be an array");
  std::vector<Complex> entries;
  entries.reserve(data.size());
  for (const json& e : data) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw InputError("matrix entries must be [re, im] pairs");
    entries.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return make_matrix(rows, cols, entries);
}

void write_matrix(std::ostream& out, const ComplexMatrix& a, const json& meta) {
  out << matrix_to_json(a, meta).dump() << '\n';
}

ComplexMatrix read_matrix(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("matrix file is not valid JSON: ") + e.what());
  }
  return matrix_from_json(doc);
}

ComplexMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

void write_table_csv(std::ostream& out, const OutcomeTable& table) {
  for (int k = 1; k <= table.n; ++k) out << "z_" << k << ',';
  out << "probability\n";
  for (const auto& o : table.outcomes) {
    for (int mode : o.z.modes()) out << mode << ',';
    out << format_double(o.probability) << '\n';
  }
}

OutcomeTable read_table_csv(std::istream& in, int m) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("outcome table is empty");
  const auto header = split_csv_line(line);
  if (header.empty() || header.back().find("probability") == std::string::npos)
    throw InputError("outcome table header must end with 'probability'");
  OutcomeTable table;
  table.m = m;
  table.n = static_cast<int>(header.size()) - 1;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != table.n + 1)
      throw InputError("outcome table row has " + std::to_string(fields.size()) + " fields");
    std::vector<int> z;
    for (int k = 0; k < table.n; ++k) z.push_back(parse_number<int>(fields[k], "mode"));
    const double p = parse_number<double>(fields.back(), "probability");
    if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("probability must be finite and >= 0");
    table.outcomes.push_back({ModeMultiset::from_sorted(std::move(z), m), p});
  }
  std::sort(table.outcomes.begin(), table.outcomes.end(),
            [](const Outcome& a, const Outcome& b) { return a.z < b.z; });
  for (std::size_t i = 1; i < table.outcomes.size(); ++i)
    if (table.outcomes[i].z == table.outcomes[i - 1].z)
      throw InputError("outcome table lists an outcome twice");
  return table;
}

SampleFormat parse_sample_format(std::string_view text) {
  if (text == "json" || text == "jsonl") return SampleFormat::jsonl;
  if (text == "csv") return SampleFormat::csv;
  throw InputError("unknown sample format '" + std::string(text) + "'");
}

SampleFormat sample_format_for_path(std::string_view path) {
  return path.ends_with(".csv") ? SampleFormat::csv : SampleFormat::jsonl;
}

void SampleWriter::write(const SampleRecord& rec) {
  if (format_ == SampleFormat::jsonl) {
    json line = {{"z", rec.z.vec()}};
    line["prob"] = rec.probability ? json(*rec.probability) : json(nullptr);
    if (!rec.alpha.empty()) line["alpha"] = rec.alpha;
    line["sampler"] = std::string(to_string(rec.sampler));
    if (rec.sampler == SamplerKind::collision_free) line["rejections"] = rec.rejections;
    out_ << line.dump() << '\n';
    return;
  }
  if (!header_written_) {
    for (int k = 1; k <= rec.z.size(); ++k) out_ << "z_" << k << ',';
    out_ << "prob\n";
    header_written_ = true;
  }
  for (int mode : rec.z.modes()) out_ << mode << ',';
  if (rec.probability) out_ << format_double(*rec.probability);
  out_ << '\n';
}

std::vector<SampleRecord> read_samples(std::istream& in, SampleFormat format, int m) {
  std::vector<SampleRecord> out;
  std::string line;
  if (format == SampleFormat::jsonl) {
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (blank(line)) continue;
      SampleRecord rec;
      try {
        const json doc = json::parse(line);
        rec.z = ModeMultiset::from_array(doc.at("z").get<std::vector<int>>(), m);
        if (doc.contains("prob") && !doc["prob"].is_null()) rec.probability = doc["prob"].get<double>();
        if (doc.contains("alpha")) rec.alpha = doc["alpha"].get<std::vector<int>>();
        if (doc.contains("sampler")) rec.sampler = parse_sampler_kind(doc["sampler"].get<std::string>());
        if (doc.contains("rejections")) rec.rejections = doc["rejections"].get<int>();
      } catch (const json::exception& e) {
        throw InputError("sample line " + std::to_string(lineno) + ": " + e.what());
      }
      out.push_back(std::move(rec));
    }
    return out;
  }
  if (!std::getline(in, line)) return out;
  const auto header = split_csv_line(line);
  const int n = static_cast<int>(header.size()) - 1;
  if (n < 1 || header.back().find("prob") == std::string::npos)
    throw InputError("sample CSV header must be z_1..z_n,prob");
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != n + 1)
      throw InputError("sample CSV row has " + std::to_string(fields.size()) + " fields");
    std::vector<int> z;
    for (int k = 0; k < n; ++k) z.push_back(parse_number<int>(fields[k], "mode"));
    SampleRecord rec;
    rec.z = ModeMultiset::from_array(z, m);
    if (!blank(fields.back())) rec.probability = parse_number<double>(fields.back(), "probability");
    out.push_back(std::move(rec));
  }
  return out;
}

json to_json(const TestReport& report) {
  return {{"statistic", report.statistic}, {"p_value", report.p_value},
          {"dof", report.dof},             {"tvd", report.tvd},
          {"alpha", report.alpha},         {"verdict", std::string(to_string(report.verdict))}};
}

json to_json(const CollisionAudit& audit) {
  return {{"samples", audit.samples},
          {"duplicates", audit.duplicates},
          {"frequency", audit.frequency},
          {"sigma", audit.sigma},
          {"bound_raw", audit.bound.raw},
          {"bound", audit.bound.clamped},
          {"haar_reference", audit.haar_reference},
          {"violation", audit.violation},
          {"verdict", audit.violation ? "fail" : "pass"}};
}

}  // namespace exactbs
