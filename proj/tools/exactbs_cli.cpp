// exactbs: command-line front end for the exact boson sampling library.
//
// Exit codes: 0 success/pass, 1 verification fail, 2 input error, 3 guard
// refusal. Every command writes its resolved configuration (including a
// defaulted seed) to stderr as one JSON line.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "exactbs/bench.hpp"
#include "exactbs/distribution.hpp"
#include "exactbs/io.hpp"
#include "exactbs/linalg.hpp"
#include "exactbs/permanent.hpp"
#include "exactbs/rng.hpp"
#include "exactbs/sampler.hpp"
#include "exactbs/verify.hpp"

namespace {

using exactbs::ComplexMatrix;
using nlohmann::json;

enum ExitCode { kOk = 0, kFail = 1, kInputError = 2, kGuard = 3 };

struct Config {
  std::string command;
  int m = 0;
  int n = 0;
  std::optional<std::uint64_t> seed;
  std::uint64_t count = 1;
  std::string algorithm = "B";
  std::string input;
  std::string output;
  std::string format = "json";
  std::string fixed_alpha = "none";
  std::uint64_t cap = exactbs::kDefaultEnumerationCap;
  int jobs = 1;
  int max_tries = 1000;
  int max_n_a = exactbs::kDefaultMaxNForA;
  // permanent
  std::string mode = "glynn";
  // verify
  std::string exact;
  std::string samples;
  std::string samples2;
  std::string test = "chisq";
  double alpha = exactbs::kDefaultAlpha;
  double min_expected = exactbs::kDefaultMinExpected;
  std::optional<double> max_tvd;
  // bench
  int n_min = 16;
  int n_max = 22;
  std::string m_rule = "2n^2";
  int reps = 10;
};

json config_json(const Config& c) {
  json j = {{"command", c.command}};
  if (c.seed) j["seed"] = *c.seed;
  if (c.command == "gen-unitary") {
    j["m"] = c.m;
    j["n"] = c.n;
  } else if (c.command == "sample") {
    j.update({{"m", c.m}, {"n", c.n}, {"count", c.count}, {"algorithm", c.algorithm},
              {"format", c.format}, {"fixed_alpha", c.fixed_alpha}, {"cap", c.cap},
              {"jobs", c.jobs}, {"max_tries", c.max_tries}, {"max_n_a", c.max_n_a}});
  } else if (c.command == "permanent") {
    j["mode"] = c.mode;
  } else if (c.command == "exact") {
    j["cap"] = c.cap;
  } else if (c.command == "verify") {
    j.update({{"test", c.test}, {"samples", c.samples}, {"alpha", c.alpha},
              {"min_expected", c.min_expected}, {"cap", c.cap}});
    if (!c.exact.empty()) j["exact"] = c.exact;
    if (!c.samples2.empty()) j["samples2"] = c.samples2;
    if (c.max_tvd) j["max_tvd"] = *c.max_tvd;
  } else if (c.command == "bench") {
    j.update({{"n_min", c.n_min}, {"n_max", c.n_max}, {"m_rule", c.m_rule}, {"reps", c.reps}});
  }
  if (!c.input.empty()) j["input"] = c.input;
  if (!c.output.empty()) j["output"] = c.output;
  return j;
}

void echo_config(const Config& c) { std::cerr << json{{"config", config_json(c)}}.dump() << '\n'; }

// Output goes to --output when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw exactbs::InputError("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

ComplexMatrix load_matrix(Config& c) {
  ComplexMatrix a;
  if (!c.input.empty()) {
    a = exactbs::read_matrix_file(c.input);
  } else if (c.m > 0 && c.n > 0) {
    a = exactbs::input_matrix(exactbs::haar_unitary(c.m, *c.seed), c.n);
  } else {
    throw exactbs::InputError("need --input or both --m and --n");
  }
  const double dev = exactbs::orthonormality_deviation(a);
  if (dev > exactbs::kOrthonormalityWarnThreshold)
    std::cerr << "warning: input columns deviate from orthonormality by " << dev
              << "; probabilities will not be normalized\n";
  c.m = static_cast<int>(a.rows());
  c.n = static_cast<int>(a.cols());
  return a;
}

int cmd_gen_unitary(Config& c) {
  if (c.m < 1) throw exactbs::InputError("--m must be >= 1");
  if (c.n == 0) c.n = c.m;
  echo_config(c);
  const ComplexMatrix a = exactbs::input_matrix(exactbs::haar_unitary(c.m, *c.seed), c.n);
  const json meta = {{"generator", "haar"},
                     {"m", c.m},
                     {"n", c.n},
                     {"seed", *c.seed},
                     {"orthonormality_deviation", exactbs::orthonormality_deviation(a)}};
  Sink sink(c.output);
  exactbs::write_matrix(sink.stream(), a, meta);
  return kOk;
}

int cmd_exact(Config& c) {
  const ComplexMatrix a = load_matrix(c);
  echo_config(c);
  const auto table = exactbs::exact_table(a, c.cap);
  Sink sink(c.output);
  exactbs::write_table_csv(sink.stream(), table);
  return kOk;
}

int cmd_sample(Config& c) {
  const ComplexMatrix a = load_matrix(c);
  const auto kind = exactbs::parse_sampler_kind(c.algorithm);
  const auto format = exactbs::parse_sample_format(c.format);
  if (c.fixed_alpha != "none" && c.fixed_alpha != "identity")
    throw exactbs::InputError("--fixed-alpha must be 'none' or 'identity'");
  const auto alpha_mode =
      c.fixed_alpha == "identity" ? exactbs::AlphaMode::identity : exactbs::AlphaMode::uniform;
  if (alpha_mode == exactbs::AlphaMode::identity && c.count > 1)
    std::cerr << "warning: --fixed-alpha identity is only exact for a single sample from a Haar "
                 "random input\n";
  echo_config(c);

  Sink sink(c.output);
  exactbs::SampleWriter writer(sink.stream(), format);
  const std::uint64_t seed = *c.seed;

  if (kind == exactbs::SamplerKind::B && c.jobs > 1) {
    constexpr std::uint64_t chunk = 4096;
    for (std::uint64_t start = 0; start < c.count; start += chunk) {
      const std::uint64_t len = std::min(chunk, c.count - start);
      // Streams are indexed globally, so chunking does not change results.
      const auto part = exactbs::sample_B_batch(a, len, seed, {alpha_mode, c.jobs, start});
      for (const auto& rec : part) writer.write(rec);
    }
    return kOk;
  }

  std::optional<exactbs::BruteSampler> brute;
  if (kind == exactbs::SamplerKind::brute && c.count > 0) brute.emplace(a, c.cap);
  const exactbs::OptionsB options{alpha_mode, {}};
  for (std::uint64_t i = 0; i < c.count; ++i) {
    exactbs::Rng rng = exactbs::Rng::stream(seed, i);
    exactbs::SampleRecord rec;
    switch (kind) {
      case exactbs::SamplerKind::brute: rec = brute->sample(rng); break;
      case exactbs::SamplerKind::A: rec = exactbs::sample_A(a, rng, c.max_n_a); break;
      case exactbs::SamplerKind::B: rec = exactbs::sample_B(a, rng, options); break;
      case exactbs::SamplerKind::collision_free:
        rec = exactbs::sample_collision_free(a, rng, c.max_tries, options);
        break;
    }
    writer.write(rec);
  }
  return kOk;
}

json complex_json(const exactbs::Complex& x) { return json::array({x.real(), x.imag()}); }

int cmd_permanent(Config& c) {
  if (c.input.empty()) throw exactbs::InputError("--input is required");
  echo_config(c);
  const ComplexMatrix b = exactbs::read_matrix_file(c.input);
  json out = {{"mode", c.mode}, {"k", b.rows()}};
  if (c.mode == "glynn") {
    out["value"] = complex_json(exactbs::permanent_glynn(b));
  } else if (c.mode == "naive") {
    out["value"] = complex_json(exactbs::permanent_naive(b));
  } else if (c.mode == "minors") {
    const auto minors = exactbs::minors_last_row(b);
    json list = json::array();
    for (Eigen::Index l = 0; l < minors.size(); ++l) list.push_back(complex_json(minors(l)));
    out["minors"] = std::move(list);
  } else {
    throw exactbs::InputError("--mode must be glynn, naive or minors");
  }
  Sink sink(c.output);
  sink.stream() << out.dump() << '\n';
  return kOk;
}

std::vector<exactbs::SampleRecord> load_samples(const std::string& path, int m) {
  std::ifstream in(path);
  if (!in) throw exactbs::InputError("cannot open samples '" + path + "'");
  auto samples = exactbs::read_samples(in, exactbs::sample_format_for_path(path), m);
  if (samples.empty()) throw exactbs::InputError("no samples in '" + path + "'");
  return samples;
}

int cmd_verify(Config& c) {
  if (c.samples.empty()) throw exactbs::InputError("--samples is required");
  std::optional<ComplexMatrix> a;
  if (!c.input.empty() || (c.m > 0 && c.n > 0)) a = load_matrix(c);
  echo_config(c);

  json out;
  bool pass = true;
  if (c.test == "collision") {
    if (!a) throw exactbs::InputError("collision audit needs --input");
    const auto samples = load_samples(c.samples, c.m);
    const auto audit = exactbs::collision_audit(std::span<const exactbs::SampleRecord>(samples), *a);
    out = exactbs::to_json(audit);
    pass = !audit.violation;
  } else if (c.test == "two-sample") {
    if (c.m < 1) throw exactbs::InputError("two-sample test needs --input or --m");
    const auto h1 = exactbs::Histogram::from_samples(load_samples(c.samples, c.m));
    const auto h2 = exactbs::Histogram::from_samples(load_samples(c.samples2, c.m));
    const auto report = exactbs::chisq_two_sample(h1, h2, c.min_expected, c.alpha);
    out = exactbs::to_json(report);
    pass = report.verdict == exactbs::Verdict::pass;
  } else if (c.test == "chisq" || c.test == "tvd") {
    exactbs::OutcomeTable table;
    if (!c.exact.empty()) {
      if (c.m < 1) throw exactbs::InputError("reading --exact needs --input or --m");
      std::ifstream in(c.exact);
      if (!in) throw exactbs::InputError("cannot open table '" + c.exact + "'");
      table = exactbs::read_table_csv(in, c.m);
    } else {
      if (!a) throw exactbs::InputError("need --exact or a matrix to build the exact table");
      table = exactbs::exact_table(*a, c.cap);
    }
    const auto hist = exactbs::Histogram::from_samples(load_samples(c.samples, c.m));
    auto report = exactbs::chisq_exact(table, hist, c.min_expected, c.alpha);
    if (c.test == "tvd" && !c.max_tvd) c.max_tvd = 0.03;
    if (c.test == "tvd") report.verdict = exactbs::Verdict::pass;
    if (c.max_tvd && report.tvd > *c.max_tvd) report.verdict = exactbs::Verdict::fail;
    out = exactbs::to_json(report);
    if (c.max_tvd) out["max_tvd"] = *c.max_tvd;
    pass = report.verdict == exactbs::Verdict::pass;
  } else {
    throw exactbs::InputError("--test must be chisq, tvd, two-sample or collision");
  }
  Sink sink(c.output);
  sink.stream() << out.dump() << '\n';
  return pass ? kOk : kFail;
}

int cmd_bench(Config& c) {
  const auto rule = exactbs::parse_mode_rule(c.m_rule);
  if (c.n_min < 2 || c.n_max < c.n_min) throw exactbs::InputError("need 2 <= n-min <= n-max");
  echo_config(c);
  Sink sink(c.output);
  auto& out = sink.stream();
  out << "n,m,sample_b_s,permanent_s,minors_s,sample_b_over_permanent,minors_over_permanent\n";
  for (int n = c.n_min; n <= c.n_max; ++n) {
    const auto row = exactbs::bench_size(n, rule(n), c.reps, *c.seed + static_cast<std::uint64_t>(n));
    out << row.n << ',' << row.m << ',' << exactbs::format_double(row.sample_b) << ','
        << exactbs::format_double(row.permanent) << ',' << exactbs::format_double(row.minors) << ','
        << exactbs::format_double(row.sample_b / row.permanent) << ','
        << exactbs::format_double(row.minors / row.permanent) << '\n';
    out.flush();
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact boson sampling: permanents, samplers and verification"};
  app.require_subcommand(1);
  Config c;
  std::uint64_t seed = 0;

  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "RNG seed (default: drawn from OS entropy and echoed)");
  };
  const auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output,-o", c.output, "output path (default stdout)");
  };

  auto* gen = app.add_subcommand("gen-unitary", "write the first n columns of an m x m Haar unitary");
  gen->add_option("--m", c.m, "modes")->required();
  gen->add_option("--n", c.n, "photons / columns (default m)");
  add_seed(gen);
  add_output(gen);

  auto* exact = app.add_subcommand("exact", "write the exact outcome table as CSV");
  exact->add_option("--input,-i", c.input, "matrix file");
  exact->add_option("--m", c.m, "modes (with --n: generate a Haar input from --seed)");
  exact->add_option("--n", c.n, "photons");
  exact->add_option("--cap", c.cap, "enumeration cap")->capture_default_str();
  add_seed(exact);
  add_output(exact);

  auto* sample = app.add_subcommand("sample", "draw boson sampling outcomes");
  sample->add_option("--input,-i", c.input, "matrix file");
  sample->add_option("--m", c.m, "modes (with --n: generate a Haar input from --seed)");
  sample->add_option("--n", c.n, "photons");
  sample->add_option("--count", c.count, "number of samples")->capture_default_str();
  sample->add_option("--algorithm", c.algorithm, "brute | A | B | collision-free")
      ->capture_default_str();
  sample->add_option("--format", c.format, "json | csv")->capture_default_str();
  sample->add_option("--fixed-alpha", c.fixed_alpha,
                     "none | identity (identity: single samples from Haar inputs only)")
      ->capture_default_str();
  sample->add_option("--cap", c.cap, "enumeration cap for brute")->capture_default_str();
  sample->add_option("--jobs", c.jobs, "worker threads for Algorithm B")->capture_default_str();
  sample->add_option("--max-tries", c.max_tries, "rejection budget for collision-free")
      ->capture_default_str();
  sample->add_option("--max-n-a", c.max_n_a, "largest n Algorithm A accepts")
      ->capture_default_str();
  add_seed(sample);
  add_output(sample);

  auto* perm = app.add_subcommand("permanent", "permanent or last-row minors of a square matrix");
  perm->add_option("--input,-i", c.input, "matrix file")->required();
  perm->add_option("--mode", c.mode, "glynn | naive | minors")->capture_default_str();
  add_output(perm);

  auto* verify = app.add_subcommand("verify", "test samples against the exact distribution");
  verify->add_option("--samples", c.samples, "samples (.jsonl or .csv)")->required();
  verify->add_option("--samples2", c.samples2, "second sample file for --test two-sample");
  verify->add_option("--exact", c.exact, "outcome table CSV (default: enumerate from --input)");
  verify->add_option("--input,-i", c.input, "matrix file");
  verify->add_option("--m", c.m, "modes");
  verify->add_option("--n", c.n, "photons");
  verify->add_option("--test", c.test, "chisq | tvd | two-sample | collision")
      ->capture_default_str();
  verify->add_option("--alpha", c.alpha, "significance level")->capture_default_str();
  verify->add_option("--min-expected", c.min_expected, "pooling threshold")->capture_default_str();
  verify->add_option("--max-tvd", c.max_tvd, "fail when TVD exceeds this");
  verify->add_option("--cap", c.cap, "enumeration cap")->capture_default_str();
  add_seed(verify);
  add_output(verify);

  auto* bench = app.add_subcommand("bench", "median timings of sample_B, permanent and minors");
  bench->add_option("--n-min", c.n_min)->capture_default_str();
  bench->add_option("--n-max", c.n_max)->capture_default_str();
  bench->add_option("--m-rule", c.m_rule, "'<c>n^2' or 'fixed:<m>'")->capture_default_str();
  bench->add_option("--reps", c.reps)->capture_default_str();
  add_seed(bench);
  add_output(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
  for (auto* sub : app.get_subcommands())
    if (sub->get_option_no_throw("--seed") != nullptr)
      c.seed = sub->count("--seed") > 0 ? seed : exactbs::entropy_seed();

  try {
    if (c.command == "gen-unitary") return cmd_gen_unitary(c);
    if (c.command == "exact") return cmd_exact(c);
    if (c.command == "sample") return cmd_sample(c);
    if (c.command == "permanent") return cmd_permanent(c);
    if (c.command == "verify") return cmd_verify(c);
    if (c.command == "bench") return cmd_bench(c);
  } catch (const exactbs::GuardError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kGuard;
  } catch (const exactbs::SamplerError& e) {
    std::cerr << "sampler error (stage " << e.stage() << "): " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
