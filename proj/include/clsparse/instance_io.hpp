#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clsparse/core_space.hpp"
#include "clsparse/sparsifier.hpp"

namespace clsparse {

/// Raw contents of an instance file before validation.
///
///   { "points": ["a", "b"], "weights": [0.5, 0.5],
///     "functions": [[[1, 0], [-1, 0]]], "lambda": [[2, 0]], "p": 2 }
///
/// Complex numbers are [re, im] pairs; `functions` is K rows of M values.
struct InstanceData {
  std::vector<std::string> points;
  std::vector<double> weights;
  std::vector<std::vector<Complex>> functions;
  std::vector<Complex> lambda;
  std::optional<double> p;
};

struct LoadOptions {
  std::optional<double> p;  // overrides the file's "p"
  bool renormalize = false;
};

/// Throws ParseError or ShapeMismatch.
InstanceData parse_instance(std::string_view json_text);
/// Throws IoError, ParseError or ShapeMismatch.
InstanceData read_instance(const std::filesystem::path& path);

/// Numbers are written so that parse_instance reproduces them bit-exactly.
std::string instance_to_json(const InstanceData& data);
void write_instance(const InstanceData& data, const std::filesystem::path& path);

SparsificationInstance build_instance(const InstanceData& data, const LoadOptions& options = {});
SparsificationInstance load_instance(const std::filesystem::path& path,
                                     const LoadOptions& options = {});

/// FNV-1a over the shape and the bit patterns of every number, as 16 hex digits.
std::string instance_hash(const InstanceData& data);

std::string result_to_json(const SparsificationResult& result);

}  // namespace clsparse
