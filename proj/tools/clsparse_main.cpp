// clsparse: sparse L^p approximation of coefficient combinations, plus
// exhaustive checks of the moment inequalities behind it.
//
//   clsparse sparsify instance.json --p 2 --eps 0.5 --seed 1
//   clsparse verify khintchine --p 1,2,3,4 --trials 200 --seed 7 --csv
//
// Exit codes: 0 all checks pass, 1 a bound failed or no witness was found,
// 2 bad input or configuration.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clsparse/error.hpp"
#include "clsparse/instance_io.hpp"
#include "clsparse/parallel.hpp"
#include "clsparse/report.hpp"
#include "clsparse/sparsifier.hpp"
#include "clsparse/suites.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

struct SparsifyOptions {
  std::string instance;
  std::optional<double> p;
  double eps = 0.5;
  std::uint64_t seed = 1;
  std::uint64_t max_attempts = clsparse::kDefaultMaxAttempts;
  std::string out;
  std::string format = "json";
  bool csv = false;
  bool renormalize = false;
};

struct VerifyOptions {
  std::string suite;
  std::vector<double> p_list;
  std::vector<double> eps_list;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<int> n_max;
  std::optional<std::uint64_t> cap;
  std::optional<std::uint64_t> max_attempts;
  std::string out;
  std::string format = "text";
  bool csv = false;
};

void emit(const std::string& body, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << body << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw clsparse::Error(clsparse::ErrorCode::IoError, "cannot open output file " + path);
  out << body;
  out.flush();
  if (!out) throw clsparse::Error(clsparse::ErrorCode::IoError, "failed writing " + path);
}

int run_sparsify(const SparsifyOptions& opt) {
  using namespace clsparse;
  const auto data = read_instance(opt.instance);
  const auto inst = build_instance(data, {opt.p, opt.renormalize});
  const auto result = sparsify(inst, opt.eps, opt.seed, opt.max_attempts, default_threads());

  // Independent re-check of the witness before reporting success.
  const double recheck = approximation_error(result.tuple, inst);
  const bool verified = recheck <= result.eps_p * (1.0 + 1e-9);

  const auto format = opt.csv ? ReportFormat::Csv : parse_report_format(opt.format);
  if (format == ReportFormat::Json) {
    emit(result_to_json(result), opt.out);
  } else {
    ReportRow row;
    row.suite = "sparsify";
    row.seed = result.seed;
    row.instance_id = instance_hash(data);
    row.p = result.p;
    row.n = inst.points();
    row.k = inst.terms();
    row.l = result.L;
    row.lhs = recheck;
    row.bound = result.eps_p;
    row.ratio = result.eps_p > 0.0 ? recheck / result.eps_p : 0.0;
    row.pass = verified;
    write_report(std::span(&row, 1), format, opt.out);
  }
  if (!verified) {
    std::cerr << "witness failed re-verification: error_p " << recheck << " > " << result.eps_p
              << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

int run_verify(const VerifyOptions& opt) {
  using namespace clsparse;
  const Suite suite = parse_suite(opt.suite);
  SuiteConfig config = default_suite_config(suite);
  if (!opt.p_list.empty()) config.p_list = opt.p_list;
  if (!opt.eps_list.empty()) config.eps_list = opt.eps_list;
  if (opt.seed) config.seed = *opt.seed;
  if (opt.trials) config.trials = *opt.trials;
  if (opt.n_max) config.n_max = *opt.n_max;
  if (opt.cap) config.cap = opt.cap;
  if (opt.max_attempts) config.max_attempts = *opt.max_attempts;
  config.threads = default_threads();
  const auto format = opt.csv ? ReportFormat::Csv : parse_report_format(opt.format);
  validate_suite_config(suite, config);

  const auto rows = run_suite(suite, config);
  write_report(rows, format, opt.out);
  std::size_t failed = 0;
  for (const auto& row : rows) {
    if (!row.pass) {
      ++failed;
      std::cerr << "FAIL " << row.suite << " instance " << row.instance_id << " p=" << row.p
                << " seed=" << row.seed << ": lhs " << format_number(row.lhs) << " > bound "
                << format_number(row.bound) << "\n";
    }
  }
  std::cerr << suite_name(suite) << ": " << rows.size() - failed << "/" << rows.size()
            << " checks passed\n";
  return failed == 0 ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse L^p approximation on finite probability spaces"};
  app.require_subcommand(1);

  SparsifyOptions sp;
  auto* sparsify_cmd = app.add_subcommand("sparsify", "find a short index tuple approximating f/||lambda||_1");
  sparsify_cmd->add_option("instance", sp.instance, "instance JSON file")->required();
  sparsify_cmd->add_option("--p", sp.p, "exponent p >= 2 (overrides the file)");
  sparsify_cmd->add_option("--eps", sp.eps, "target accuracy in (0, 1]")->capture_default_str();
  sparsify_cmd->add_option("--seed", sp.seed, "random seed")->capture_default_str();
  sparsify_cmd->add_option("--max-attempts", sp.max_attempts, "sampling attempts")->capture_default_str();
  sparsify_cmd->add_option("--out", sp.out, "output file (default stdout)");
  sparsify_cmd->add_option("--format", sp.format, "json, csv or text")->capture_default_str();
  sparsify_cmd->add_flag("--csv", sp.csv, "shorthand for --format csv");
  sparsify_cmd->add_flag("--renormalize", sp.renormalize, "rescale weights to sum to 1");

  VerifyOptions vo;
  auto* verify_cmd = app.add_subcommand("verify", "run a randomized inequality suite");
  verify_cmd->add_option("suite", vo.suite, "khintchine, mz or cls")->required();
  verify_cmd->add_option("--p", vo.p_list, "comma-separated exponents")->delimiter(',');
  verify_cmd->add_option("--eps", vo.eps_list, "comma-separated accuracies (cls)")->delimiter(',');
  verify_cmd->add_option("--seed", vo.seed, "suite seed");
  verify_cmd->add_option("--trials", vo.trials, "number of random instances");
  verify_cmd->add_option("--n-max", vo.n_max, "largest N (khintchine, mz) or L (cls)");
  verify_cmd->add_option("--cap", vo.cap, "enumeration cap in terms/tuples");
  verify_cmd->add_option("--max-attempts", vo.max_attempts, "sparsify attempts per instance (cls)");
  verify_cmd->add_option("--out", vo.out, "report file (default stdout)");
  verify_cmd->add_option("--format", vo.format, "text, csv or json")->capture_default_str();
  verify_cmd->add_flag("--csv", vo.csv, "shorthand for --format csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*sparsify_cmd) return run_sparsify(sp);
    return run_verify(vo);
  } catch (const clsparse::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == clsparse::ErrorCode::MaxAttemptsExceeded ? kExitViolation : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
