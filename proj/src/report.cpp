#include "clsparse/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "clsparse/error.hpp"

namespace clsparse {

namespace {

std::string optional_count(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::array<std::string, 11> cells(const ReportRow& row) {
  return {row.suite,
          std::to_string(row.seed),
          row.instance_id,
          format_number(row.p),
          optional_count(row.n),
          optional_count(row.k),
          optional_count(row.l),
          format_number(row.lhs),
          format_number(row.bound),
          format_number(row.ratio),
          row.pass ? "pass" : "fail"};
}

std::string render_csv(std::span<const ReportRow> rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& row : rows) {
    const auto c = cells(row);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(c[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render_text(std::span<const ReportRow> rows) {
  const std::array<std::string, 11> header = {"suite", "seed", "instance_id", "p", "N", "K",
                                              "L", "lhs", "bound", "ratio", "verdict"};
  std::vector<std::array<std::string, 11>> table{header};
  for (const auto& row : rows) table.push_back(cells(row));
  std::array<std::size_t, 11> width{};
  for (const auto& line : table) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::string out;
  for (const auto& line : table) {
    std::string text;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) text += "  ";
      text += line[i];
      if (i + 1 < line.size()) text.append(width[i] - line[i].size(), ' ');
    }
    out += text + '\n';
  }
  return out;
}

std::string render_json(std::span<const ReportRow> rows) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json r;
    r["suite"] = row.suite;
    r["seed"] = row.seed;
    r["instance_id"] = row.instance_id;
    r["p"] = row.p;
    r["N"] = row.n ? nlohmann::ordered_json(*row.n) : nlohmann::ordered_json(nullptr);
    r["K"] = row.k ? nlohmann::ordered_json(*row.k) : nlohmann::ordered_json(nullptr);
    r["L"] = row.l ? nlohmann::ordered_json(*row.l) : nlohmann::ordered_json(nullptr);
    // JSON has no infinity; a missing witness is reported as null.
    auto number = [](double x) {
      return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
    };
    r["lhs"] = number(row.lhs);
    r["bound"] = number(row.bound);
    r["ratio"] = number(row.ratio);
    r["verdict"] = row.pass ? "pass" : "fail";
    doc.push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "text") return ReportFormat::Text;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw Error(ErrorCode::ConfigError, "unknown report format \"" + std::string(name) +
                                          "\" (expected text, csv or json)");
}

std::string render_report(std::span<const ReportRow> rows, ReportFormat format) {
  switch (format) {
    case ReportFormat::Text: return render_text(rows);
    case ReportFormat::Csv: return render_csv(rows);
    case ReportFormat::Json: return render_json(rows);
  }
  return {};
}

void write_report(std::span<const ReportRow> rows, ReportFormat format, const std::string& path) {
  const std::string body = render_report(rows, format);
  if (path.empty() || path == "-") {
    std::cout << body << std::flush;
    if (!std::cout) throw Error(ErrorCode::IoError, "failed writing report to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open report file " + path);
  out << body;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "failed writing report file " + path);
}

}  // namespace clsparse
