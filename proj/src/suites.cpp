#include "clsparse/suites.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "clsparse/error.hpp"
#include "clsparse/generators.hpp"
#include "clsparse/hashing.hpp"
#include "clsparse/khintchine.hpp"
#include "clsparse/marcinkiewicz.hpp"
#include "clsparse/parallel.hpp"
#include "clsparse/sparsifier.hpp"

namespace clsparse {

namespace {

constexpr int kMzMaxPoints = 3;
constexpr int kClsMaxTerms = 6;
constexpr int kClsMaxPoints = 8;

[[noreturn]] void config_fail(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

std::string trial_id(std::uint64_t trial, const std::string& hash) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%04llu-", static_cast<unsigned long long>(trial));
  return buf + hash;
}

double safe_ratio(double lhs, double bound) { return bound > 0.0 ? lhs / bound : (lhs > 0.0 ? INFINITY : 0.0); }

ReportRow make_row(std::string suite, const SuiteConfig& config, std::string id, double p,
                   double lhs, double bound, bool pass) {
  ReportRow row;
  row.suite = std::move(suite);
  row.seed = config.seed;
  row.instance_id = std::move(id);
  row.p = p;
  row.lhs = lhs;
  row.bound = bound;
  row.ratio = safe_ratio(lhs, bound);
  row.pass = pass;
  return row;
}

int khintchine_max_length(const SuiteConfig& config) {
  if (!config.cap) return kMaxRademacherLength;
  return std::min(62, static_cast<int>(std::floor(std::log2(static_cast<double>(*config.cap)))));
}

std::vector<ReportRow> khintchine_trial(const SuiteConfig& config, std::uint64_t trial) {
  const auto c = random_rademacher_coefficients(config.seed, trial, config.n_max);
  Fnv1a h;
  for (double x : c) h.number(x);
  const std::string id = trial_id(trial, h.hex());
  const auto n = static_cast<std::uint64_t>(c.size());

  std::vector<ReportRow> rows;
  for (double p : config.p_list) {
    const auto report = khintchine_bound_check({c, p}, 1, khintchine_max_length(config));
    auto push = [&](std::string suite, double lhs, double bound, bool pass) {
      auto row = make_row(std::move(suite), config, id, p, lhs, bound, pass);
      row.n = n;
      rows.push_back(std::move(row));
    };
    push("khintchine.theorem", report.lhs, report.bound_theorem, report.pass_theorem);
    push("khintchine.haagerup", report.lhs, report.bound_haagerup, report.pass_haagerup);
    if (p == 2.0) {
      const double gap = std::abs(report.lhs - report.l2_norm_sq);
      push("khintchine.orthogonality", report.lhs, report.l2_norm_sq,
           gap <= 1e-12 * report.l2_norm_sq);
    }
    if (report.ratio_constant) {
      const double bound = *report.ratio_constant * std::pow(report.l2_norm_sq, p / 2.0);
      push("khintchine.ratio_constant", report.lhs, bound, report.lhs <= bound * (1.0 + 1e-10));
    }
  }
  return rows;
}

std::vector<ReportRow> mz_trial(const SuiteConfig& config, std::uint64_t trial) {
  const std::uint64_t cap = config.cap.value_or(kMaxProductTuples);
  const auto data = random_centered_family(config.seed, trial, kMzMaxPoints, config.n_max);
  Fnv1a h;
  for (double w : data.space.weights()) h.number(w);
  for (const auto& row : data.rows) {
    for (const Complex& z : row) h.number(z);
  }
  const std::string id = trial_id(trial, h.hex());
  const std::size_t m = data.space.size();
  const std::size_t n = data.rows.size();

  std::vector<ReportRow> rows;
  for (double p : config.p_list) {
    const auto fam = make_centered_family(data.space, data.rows, p);
    auto push = [&](std::string suite, double lhs, double bound, bool pass) {
      auto row = make_row(std::move(suite), config, id, p, lhs, bound, pass);
      row.n = n;
      rows.push_back(std::move(row));
    };
    const auto report = mz_report_exhaustive(fam, 1, cap);
    push("mz.theorem", report.lhs, report.bound, report.pass);
    if (p == 2.0) {
      const double gap = std::abs(report.lhs - report.rhs_core);
      push("mz.orthogonality", report.lhs, report.rhs_core,
           gap <= 1e-10 * std::max(report.rhs_core, std::numeric_limits<double>::min()));
    }
    if (product_size_within(m, 2 * n, cap) != 0) {
      const auto sym = symmetrization_lhs(fam, 1, cap);
      push("mz.symmetrization", sym.original, sym.symmetrized, sym.holds);
    }
  }
  return rows;
}

std::vector<ReportRow> cls_trial(const SuiteConfig& config, std::uint64_t trial) {
  const std::uint64_t cap = config.cap.value_or(kMaxIndexTuples);
  std::vector<ReportRow> rows;
  for (std::size_t pi = 0; pi < config.p_list.size(); ++pi) {
    const double p = config.p_list[pi];
    const auto data = random_sparsification_data(config.seed, trial * config.p_list.size() + pi,
                                                 kClsMaxTerms, kClsMaxPoints, p);
    const auto inst = build_instance(data);
    const std::string id = trial_id(trial, instance_hash(data));
    const auto k = static_cast<std::uint64_t>(inst.terms());
    const auto m = static_cast<std::uint64_t>(inst.points());

    auto push = [&](std::string suite, std::string row_id, std::uint64_t L, double lhs,
                    double bound, bool pass) {
      auto row = make_row(std::move(suite), config, std::move(row_id), p, lhs, bound, pass);
      row.n = m;
      row.k = k;
      row.l = L;
      rows.push_back(std::move(row));
    };

    for (int L = 1; L <= config.n_max; ++L) {
      const auto length = static_cast<std::uint64_t>(L);
      if (product_size_within(inst.terms(), length, cap) == 0) break;
      const double expected = expected_error_exhaustive(inst, length, 1, cap);
      const double expected_bound = expected_error_bound(p, length);
      push("cls.expected_error", id, length, expected, expected_bound,
           expected <= expected_bound * (1.0 + 1e-9));
      for (double eps : config.eps_list) {
        const double bad = bad_set_measure_exhaustive(inst, eps, length, 1, cap);
        const auto bounds = bad_set_bounds(p, eps, length);
        const std::string eps_id = id + "@eps=" + format_number(eps);
        push("cls.bad_set", eps_id, length, bad, bounds.stated, bad <= bounds.stated * (1.0 + 1e-9));
        const double markov = expected / std::pow(eps, p);
        push("cls.markov", eps_id, length, bad, markov, bad <= markov * (1.0 + 1e-9));
      }
    }

    for (double eps : config.eps_list) {
      const std::string eps_id = id + "@eps=" + format_number(eps);
      const std::uint64_t L = choose_L(p, eps);
      const double eps_p = std::pow(eps, p);
      try {
        const auto result = sparsify(inst, eps, config.seed + trial, config.max_attempts);
        const double recheck = approximation_error(result.tuple, inst);
        push("cls.sparsify", eps_id, L, recheck, eps_p, recheck <= eps_p * (1.0 + 1e-9));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MaxAttemptsExceeded) throw;
        push("cls.sparsify", eps_id, L, INFINITY, eps_p, false);
      }
    }
  }
  return rows;
}

}  // namespace

Suite parse_suite(std::string_view name) {
  if (name == "khintchine") return Suite::Khintchine;
  if (name == "mz") return Suite::Marcinkiewicz;
  if (name == "cls") return Suite::Sparsifier;
  config_fail("unknown suite \"" + std::string(name) + "\" (expected khintchine, mz or cls)");
}

std::string_view suite_name(Suite suite) {
  switch (suite) {
    case Suite::Khintchine: return "khintchine";
    case Suite::Marcinkiewicz: return "mz";
    case Suite::Sparsifier: return "cls";
  }
  return "";
}

SuiteConfig default_suite_config(Suite suite) {
  SuiteConfig config;
  switch (suite) {
    case Suite::Khintchine:
      config.trials = 200;
      config.p_list = {1, 2, 3, 4, 5, 6, 8};
      config.n_max = 12;
      break;
    case Suite::Marcinkiewicz:
      config.trials = 100;
      config.p_list = {1, 2, 3, 4, 6};
      config.n_max = 5;
      break;
    case Suite::Sparsifier:
      config.trials = 20;
      config.p_list = {2, 4};
      config.eps_list = {0.25, 0.5, 1.0};
      config.n_max = 8;
      break;
  }
  return config;
}

void validate_suite_config(Suite suite, const SuiteConfig& config) {
  if (config.trials < 1) config_fail("trials must be >= 1");
  if (config.p_list.empty()) config_fail("p list is empty");
  if (config.n_max < 1) config_fail("n-max must be >= 1");
  if (config.cap && *config.cap < 1) config_fail("cap must be >= 1");
  if (config.max_attempts < 1) config_fail("max-attempts must be >= 1");
  const double p_floor = suite == Suite::Sparsifier ? 2.0 : 1.0;
  for (double p : config.p_list) {
    if (!(p >= p_floor) || !std::isfinite(p)) {
      std::ostringstream msg;
      msg << "p = " << p << " is outside the " << suite_name(suite) << " suite's domain p >= "
          << p_floor;
      config_fail(msg.str());
    }
  }
  switch (suite) {
    case Suite::Khintchine:
      if (config.n_max > khintchine_max_length(config)) {
        config_fail("n-max " + std::to_string(config.n_max) + " needs more than cap sign vectors");
      }
      break;
    case Suite::Marcinkiewicz:
      if (product_size_within(kMzMaxPoints, config.n_max,
                              config.cap.value_or(kMaxProductTuples)) == 0) {
        config_fail("3^n-max tuples exceed the enumeration cap");
      }
      break;
    case Suite::Sparsifier:
      if (config.eps_list.empty()) config_fail("eps list is empty");
      for (double eps : config.eps_list) {
        if (!(eps > 0.0 && eps <= 1.0)) {
          config_fail("eps = " + format_number(eps) + " is outside (0, 1]");
        }
      }
      break;
  }
}

std::vector<ReportRow> run_suite(Suite suite, const SuiteConfig& config) {
  validate_suite_config(suite, config);
  std::vector<std::vector<ReportRow>> per_trial(config.trials);
  parallel_blocks(config.trials, config.threads, [&](std::size_t trial) {
    switch (suite) {
      case Suite::Khintchine: per_trial[trial] = khintchine_trial(config, trial); break;
      case Suite::Marcinkiewicz: per_trial[trial] = mz_trial(config, trial); break;
      case Suite::Sparsifier: per_trial[trial] = cls_trial(config, trial); break;
    }
  });
  std::vector<ReportRow> rows;
  for (auto& chunk : per_trial) {
    for (auto& row : chunk) rows.push_back(std::move(row));
  }
  return rows;
}

bool all_pass(const std::vector<ReportRow>& rows) {
  for (const auto& row : rows) {
    if (!row.pass) return false;
  }
  return true;
}

}  // namespace clsparse
