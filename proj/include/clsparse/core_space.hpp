#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace clsparse {

using Complex = std::complex<double>;

inline constexpr double kWeightSumTolerance = 1e-12;
inline constexpr double kNormSlack = 1e-9;

/// Finite set of labelled points with probability weights. Zero weights are
/// legal; the points stay addressable but carry no mass.
class DiscreteProbabilitySpace {
 public:
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double weight(std::size_t j) const { return weights_[j]; }

  /// Cumulative weights, last entry pinned to 1; used for inverse-CDF sampling.
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }
  std::size_t sample_index(double u) const;

 private:
  friend DiscreteProbabilitySpace make_space(std::vector<std::string>, std::vector<double>);
  DiscreteProbabilitySpace(std::vector<std::string> labels, std::vector<double> weights);

  std::vector<std::string> labels_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

/// Throws EmptySpace, ShapeMismatch, NonFinite, NegativeWeight or WeightSumNotOne.
DiscreteProbabilitySpace make_space(std::vector<std::string> labels, std::vector<double> weights);

/// Uniform space on labels "0".."m-1".
DiscreteProbabilitySpace uniform_space(std::size_t m);

/// Explicit renormalization for inputs that are known to be off by scale.
std::vector<double> renormalize_weights(std::span<const double> weights);

Complex signum(Complex z) noexcept;

/// sum_j w_j |f_j|^p, the p-th power of the L^p norm.
double lp_moment(const DiscreteProbabilitySpace& space, std::span<const Complex> f, double p);
double lp_norm(const DiscreteProbabilitySpace& space, std::span<const Complex> f, double p);
Complex weighted_mean(const DiscreteProbabilitySpace& space, std::span<const Complex> f);

bool is_finite(Complex z) noexcept;

/// K x M table of function values, row k holding g_k at every point. Every
/// row has L^p norm at most 1 + kNormSlack at `certified_p()`.
class FunctionTable {
 public:
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double certified_p() const noexcept { return certified_p_; }

  std::span<const Complex> row(std::size_t k) const {
    return {values_.data() + k * cols_, cols_};
  }
  Complex operator()(std::size_t k, std::size_t j) const { return values_[k * cols_ + j]; }

 private:
  friend FunctionTable make_function_table(const DiscreteProbabilitySpace&,
                                           const std::vector<std::vector<Complex>>&, double);
  FunctionTable(std::size_t rows, std::size_t cols, std::vector<Complex> values, double p)
      : rows_(rows), cols_(cols), certified_p_(p), values_(std::move(values)) {}

  std::size_t rows_;
  std::size_t cols_;
  double certified_p_;
  std::vector<Complex> values_;
};

/// Throws ShapeMismatch, NonFinite, PLessThanOne, or NormExceeded naming the row.
FunctionTable make_function_table(const DiscreteProbabilitySpace& space,
                                  const std::vector<std::vector<Complex>>& rows, double p);

class CoefficientVector {
 public:
  const std::vector<Complex>& lambda() const noexcept { return lambda_; }
  const std::vector<Complex>& signum() const noexcept { return signum_; }
  double l1_norm() const noexcept { return l1_norm_; }
  std::size_t size() const noexcept { return lambda_.size(); }

 private:
  friend CoefficientVector make_coefficients(std::vector<Complex>);
  explicit CoefficientVector(std::vector<Complex> lambda);

  std::vector<Complex> lambda_;
  std::vector<Complex> signum_;
  double l1_norm_ = 0.0;
};

/// Throws NonFinite, or ZeroCoefficients for an empty or all-zero vector.
CoefficientVector make_coefficients(std::vector<Complex> lambda);

}  // namespace clsparse
