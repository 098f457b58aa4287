#include "clsparse/core_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clsparse/compensated_sum.hpp"
#include "clsparse/error.hpp"

namespace clsparse {

namespace {

void require_valid_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "exponent p must be a finite real >= 1, got " << p;
    throw Error(ErrorCode::PLessThanOne, msg.str());
  }
}

void require_row_length(const DiscreteProbabilitySpace& space, std::size_t n) {
  if (n != space.size()) {
    std::ostringstream msg;
    msg << "function row has " << n << " values but the space has " << space.size()
        << " points";
    throw Error(ErrorCode::ShapeMismatch, msg.str());
  }
}

}  // namespace

DiscreteProbabilitySpace::DiscreteProbabilitySpace(std::vector<std::string> labels,
                                                   std::vector<double> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
  cumulative_.resize(weights_.size());
  CompensatedSum running;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    running.add(weights_[j]);
    cumulative_[j] = running.value();
  }
  // Pin the tail so a uniform draw in [0,1) always lands on a positive-weight point.
  for (std::size_t j = weights_.size(); j-- > 0;) {
    cumulative_[j] = 1.0;
    if (weights_[j] > 0.0) break;
  }
}

std::size_t DiscreteProbabilitySpace::sample_index(double u) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<std::size_t>(std::min(it - cumulative_.begin(),
                                           static_cast<std::ptrdiff_t>(size() - 1)));
}

DiscreteProbabilitySpace make_space(std::vector<std::string> labels, std::vector<double> weights) {
  if (weights.empty()) throw Error(ErrorCode::EmptySpace, "a probability space needs at least one point");
  if (labels.size() != weights.size()) {
    std::ostringstream msg;
    msg << labels.size() << " labels but " << weights.size() << " weights";
    throw Error(ErrorCode::ShapeMismatch, msg.str());
  }
  CompensatedSum total;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!std::isfinite(weights[j])) {
      throw Error(ErrorCode::NonFinite, "weight " + std::to_string(j) + " is not finite");
    }
    if (weights[j] < 0.0) {
      std::ostringstream msg;
      msg << "weight " << j << " is negative (" << weights[j] << ")";
      throw Error(ErrorCode::NegativeWeight, msg.str());
    }
    total.add(weights[j]);
  }
  if (std::abs(total.value() - 1.0) > kWeightSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights sum to " << total.value() << ", not 1 within " << kWeightSumTolerance;
    throw Error(ErrorCode::WeightSumNotOne, msg.str());
  }
  return DiscreteProbabilitySpace(std::move(labels), std::move(weights));
}

DiscreteProbabilitySpace uniform_space(std::size_t m) {
  std::vector<std::string> labels;
  labels.reserve(m);
  for (std::size_t j = 0; j < m; ++j) labels.push_back(std::to_string(j));
  return make_space(std::move(labels), std::vector<double>(m, m ? 1.0 / static_cast<double>(m) : 0.0));
}

std::vector<double> renormalize_weights(std::span<const double> weights) {
  CompensatedSum total;
  for (double w : weights) total.add(w);
  if (!(total.value() > 0.0) || !std::isfinite(total.value())) {
    throw Error(ErrorCode::WeightSumNotOne, "cannot renormalize weights with a non-positive sum");
  }
  std::vector<double> out(weights.begin(), weights.end());
  for (double& w : out) w /= total.value();
  return out;
}

Complex signum(Complex z) noexcept {
  if (z == Complex{}) return {};
  // std::abs uses hypot, so huge and tiny moduli do not over/underflow.
  return z / std::abs(z);
}

bool is_finite(Complex z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double lp_moment(const DiscreteProbabilitySpace& space, std::span<const Complex> f, double p) {
  require_valid_p(p);
  require_row_length(space, f.size());
  CompensatedSum acc;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double w = space.weight(j);
    if (w == 0.0) continue;
    acc.add(w * std::pow(std::abs(f[j]), p));
  }
  return acc.value();
}

double lp_norm(const DiscreteProbabilitySpace& space, std::span<const Complex> f, double p) {
  require_valid_p(p);
  require_row_length(space, f.size());
  double scale = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (space.weight(j) > 0.0) scale = std::max(scale, std::abs(f[j]));
  }
  if (scale == 0.0) return 0.0;
  CompensatedSum acc;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double w = space.weight(j);
    if (w == 0.0) continue;
    acc.add(w * std::pow(std::abs(f[j]) / scale, p));
  }
  return scale * std::pow(acc.value(), 1.0 / p);
}

Complex weighted_mean(const DiscreteProbabilitySpace& space, std::span<const Complex> f) {
  require_row_length(space, f.size());
  CompensatedComplexSum acc;
  for (std::size_t j = 0; j < f.size(); ++j) acc.add(space.weight(j) * f[j]);
  return acc.value();
}

FunctionTable make_function_table(const DiscreteProbabilitySpace& space,
                                  const std::vector<std::vector<Complex>>& rows, double p) {
  require_valid_p(p);
  const std::size_t m = space.size();
  std::vector<Complex> values;
  values.reserve(rows.size() * m);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& row = rows[k];
    if (row.size() != m) {
      std::ostringstream msg;
      msg << "function row " << k << " has " << row.size() << " values, expected " << m;
      throw Error(ErrorCode::ShapeMismatch, msg.str());
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (!is_finite(row[j])) {
        std::ostringstream msg;
        msg << "function row " << k << " has a non-finite value at point " << j;
        throw Error(ErrorCode::NonFinite, msg.str());
      }
    }
    const double norm = lp_norm(space, row, p);
    if (norm > 1.0 + kNormSlack) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "function row " << k << " has L^" << p << " norm " << norm << " > 1";
      throw Error(ErrorCode::NormExceeded, msg.str());
    }
    values.insert(values.end(), row.begin(), row.end());
  }
  return FunctionTable(rows.size(), m, std::move(values), p);
}

CoefficientVector::CoefficientVector(std::vector<Complex> lambda) : lambda_(std::move(lambda)) {
  signum_.reserve(lambda_.size());
  CompensatedSum l1;
  for (const Complex& z : lambda_) {
    signum_.push_back(clsparse::signum(z));
    l1.add(std::abs(z));
  }
  l1_norm_ = l1.value();
}

CoefficientVector make_coefficients(std::vector<Complex> lambda) {
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    if (!is_finite(lambda[k])) {
      throw Error(ErrorCode::NonFinite, "coefficient " + std::to_string(k) + " is not finite");
    }
  }
  CoefficientVector out(std::move(lambda));
  if (!(out.l1_norm() > 0.0)) {
    throw Error(ErrorCode::ZeroCoefficients, "coefficient vector is empty or identically zero");
  }
  return out;
}

}  // namespace clsparse
