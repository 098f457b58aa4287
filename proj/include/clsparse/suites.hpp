#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "clsparse/report.hpp"

namespace clsparse {

enum class Suite { Khintchine, Marcinkiewicz, Sparsifier };

/// "khintchine", "mz" or "cls"; throws ConfigError otherwise.
Suite parse_suite(std::string_view name);
std::string_view suite_name(Suite suite);

struct SuiteConfig {
  std::uint64_t seed = 7;
  std::uint64_t trials = 100;
  std::vector<double> p_list;
  std::vector<double> eps_list;  // cls only
  int n_max = 0;                 // N for khintchine/mz, largest L for cls
  std::optional<std::uint64_t> cap;
  std::uint64_t max_attempts = 1000;
  unsigned threads = 1;
};

/// Defaults:
///   khintchine  p = 1,2,3,4,5,6,8   trials 200  N <= 12   cap 2^24 sign vectors
///   mz          p = 1,2,3,4,6       trials 100  N <= 5    cap 1e7 tuples, M <= 3
///   cls         p = 2,4  eps = 0.25,0.5,1  trials 20  L <= 8  cap 1e6 tuples, K <= 6, M <= 8
SuiteConfig default_suite_config(Suite suite);

/// Throws ConfigError naming the offending setting.
void validate_suite_config(Suite suite, const SuiteConfig& config);

/// Rows come back in (trial, p, check) order regardless of config.threads.
std::vector<ReportRow> run_suite(Suite suite, const SuiteConfig& config);

bool all_pass(const std::vector<ReportRow>& rows);

}  // namespace clsparse
