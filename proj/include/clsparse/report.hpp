#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace clsparse {

/// One verified inequality: `lhs` against `bound` for a single instance.
struct ReportRow {
  std::string suite;
  std::uint64_t seed = 0;
  std::string instance_id;
  double p = 0.0;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> k;
  std::optional<std::uint64_t> l;
  double lhs = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool pass = false;
};

enum class ReportFormat { Text, Csv, Json };

/// "text", "csv" or "json"; throws ConfigError otherwise.
ReportFormat parse_report_format(std::string_view name);

inline constexpr std::string_view kCsvHeader = "suite,seed,instance_id,p,N,K,L,lhs,bound,ratio,verdict";

std::string render_report(std::span<const ReportRow> rows, ReportFormat format);

/// Writes to `path`, or stdout when path is empty or "-". Throws IoError.
void write_report(std::span<const ReportRow> rows, ReportFormat format, const std::string& path);

/// %.17g, so values round-trip exactly.
std::string format_number(double x);

}  // namespace clsparse
