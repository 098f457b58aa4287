#include "clsparse/instance_io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "clsparse/error.hpp"
#include "clsparse/hashing.hpp"

namespace clsparse {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double read_number(const json& value, const std::string& where) {
  if (!value.is_number()) parse_fail(where + " must be a number");
  return value.get<double>();
}

Complex read_complex(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 2) parse_fail(where + " must be an [re, im] pair");
  return {read_number(value[0], where + "[0]"), read_number(value[1], where + "[1]")};
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace

InstanceData parse_instance(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("instance must be a JSON object");
  for (const char* key : {"points", "weights", "functions", "lambda"}) {
    if (!doc.contains(key)) parse_fail(std::string("missing key \"") + key + "\"");
    if (!doc[key].is_array()) parse_fail(std::string("\"") + key + "\" must be an array");
  }

  InstanceData data;
  for (const auto& label : doc["points"]) {
    if (label.is_string()) {
      data.points.push_back(label.get<std::string>());
    } else if (label.is_number()) {
      data.points.push_back(label.dump());
    } else {
      parse_fail("point labels must be strings");
    }
  }
  for (std::size_t j = 0; j < doc["weights"].size(); ++j) {
    data.weights.push_back(read_number(doc["weights"][j], "weights[" + std::to_string(j) + "]"));
  }
  const auto& functions = doc["functions"];
  for (std::size_t k = 0; k < functions.size(); ++k) {
    const std::string where = "functions[" + std::to_string(k) + "]";
    if (!functions[k].is_array()) parse_fail(where + " must be an array");
    std::vector<Complex> row;
    for (std::size_t j = 0; j < functions[k].size(); ++j) {
      row.push_back(read_complex(functions[k][j], where + "[" + std::to_string(j) + "]"));
    }
    data.functions.push_back(std::move(row));
  }
  for (std::size_t k = 0; k < doc["lambda"].size(); ++k) {
    data.lambda.push_back(read_complex(doc["lambda"][k], "lambda[" + std::to_string(k) + "]"));
  }
  if (doc.contains("p") && !doc["p"].is_null()) data.p = read_number(doc["p"], "p");

  const std::size_t m = data.points.size();
  if (data.weights.size() != m) {
    std::ostringstream msg;
    msg << data.weights.size() << " weights for " << m << " points";
    throw Error(ErrorCode::ShapeMismatch, msg.str());
  }
  for (std::size_t k = 0; k < data.functions.size(); ++k) {
    if (data.functions[k].size() != m) {
      std::ostringstream msg;
      msg << "function row " << k << " has " << data.functions[k].size() << " values for " << m
          << " points";
      throw Error(ErrorCode::ShapeMismatch, msg.str());
    }
  }
  if (data.lambda.size() != data.functions.size()) {
    std::ostringstream msg;
    msg << data.lambda.size() << " coefficients for " << data.functions.size() << " functions";
    throw Error(ErrorCode::ShapeMismatch, msg.str());
  }
  return data;
}

InstanceData read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open instance file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_instance(text.str());
}

std::string instance_to_json(const InstanceData& data) {
  json doc;
  doc["points"] = data.points;
  doc["weights"] = data.weights;
  json functions = json::array();
  for (const auto& row : data.functions) {
    json r = json::array();
    for (const Complex& z : row) r.push_back(complex_json(z));
    functions.push_back(std::move(r));
  }
  doc["functions"] = std::move(functions);
  json lambda = json::array();
  for (const Complex& z : data.lambda) lambda.push_back(complex_json(z));
  doc["lambda"] = std::move(lambda);
  if (data.p) doc["p"] = *data.p;
  return doc.dump(2) + "\n";
}

void write_instance(const InstanceData& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write instance file " + path.string());
  out << instance_to_json(data);
  if (!out) throw Error(ErrorCode::IoError, "failed writing instance file " + path.string());
}

SparsificationInstance build_instance(const InstanceData& data, const LoadOptions& options) {
  const std::optional<double> p = options.p ? options.p : data.p;
  if (!p) throw Error(ErrorCode::ConfigError, "no exponent: pass --p or set \"p\" in the instance");
  auto weights = options.renormalize ? renormalize_weights(data.weights) : data.weights;
  auto space = make_space(data.points, std::move(weights));
  auto lambda = make_coefficients(data.lambda);
  if (data.functions.empty()) throw Error(ErrorCode::ShapeMismatch, "instance has no functions");
  if (*p < 2.0) {
    std::ostringstream msg;
    msg << "sparsification needs p >= 2, got " << *p;
    throw Error(ErrorCode::BadP, msg.str());
  }
  auto table = make_function_table(space, data.functions, *p);
  return make_instance(std::move(space), std::move(table), std::move(lambda), *p);
}

SparsificationInstance load_instance(const std::filesystem::path& path, const LoadOptions& options) {
  return build_instance(read_instance(path), options);
}

std::string instance_hash(const InstanceData& data) {
  Fnv1a h;
  h.count(data.points.size());
  for (const auto& label : data.points) h.text(label);
  for (double w : data.weights) h.number(w);
  h.count(data.functions.size());
  for (const auto& row : data.functions) {
    for (const Complex& z : row) h.number(z);
  }
  for (const Complex& z : data.lambda) h.number(z);
  return h.hex();
}

std::string result_to_json(const SparsificationResult& result) {
  json doc;
  doc["tuple"] = result.tuple;
  doc["L"] = result.L;
  doc["p"] = result.p;
  doc["eps"] = result.eps;
  doc["eps_p"] = result.eps_p;
  doc["error_p"] = result.error_p;
  doc["attempts"] = result.attempts;
  doc["seed"] = result.seed;
  return doc.dump(2) + "\n";
}

}  // namespace clsparse
