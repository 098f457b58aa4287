#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clsparse/core_space.hpp"

namespace clsparse {

inline constexpr std::uint64_t kMaxIndexTuples = 1'000'000;
inline constexpr std::uint64_t kDefaultMaxAttempts = 1000;

/// nu({k}) = |lambda_k| / ||lambda||_1 on indices 0..K-1.
struct SamplingMeasure {
  std::vector<double> probs;
  std::vector<double> cumulative;  // last positive entry pinned to 1

  /// Inverse CDF; never returns an index of probability zero for u in [0, 1).
  std::size_t sample(double u) const;
};

SamplingMeasure sampling_measure(const CoefficientVector& lambda);

/// f = sum_k lambda_k g_k on a finite space, with p >= 2 and every g_k of
/// L^p norm at most 1. Holds the derived f0 = f / ||lambda||_1, the signed
/// rows lambda_k° g_k and the sampling measure.
class SparsificationInstance {
 public:
  const DiscreteProbabilitySpace& space() const noexcept { return space_; }
  const FunctionTable& functions() const noexcept { return functions_; }
  const CoefficientVector& lambda() const noexcept { return lambda_; }
  const SamplingMeasure& measure() const noexcept { return measure_; }
  double p() const noexcept { return p_; }
  std::size_t terms() const noexcept { return functions_.rows(); }
  std::size_t points() const noexcept { return space_.size(); }

  /// f0 at every point.
  std::span<const Complex> target() const noexcept { return target_; }
  /// lambda_k° g_k(x_j), row-major K x M.
  std::span<const Complex> signed_row(std::size_t k) const {
    return {signed_rows_.data() + k * points(), points()};
  }

 private:
  friend SparsificationInstance make_instance(DiscreteProbabilitySpace, FunctionTable,
                                              CoefficientVector, double);
  SparsificationInstance(DiscreteProbabilitySpace space, FunctionTable functions,
                         CoefficientVector lambda, double p);

  DiscreteProbabilitySpace space_;
  FunctionTable functions_;
  CoefficientVector lambda_;
  double p_;
  SamplingMeasure measure_;
  std::vector<Complex> signed_rows_;
  std::vector<Complex> target_;
};

/// Throws BadP (p < 2), ShapeMismatch, or NormExceeded if a row is not
/// certified at this p.
SparsificationInstance make_instance(DiscreteProbabilitySpace space, FunctionTable functions,
                                     CoefficientVector lambda, double p);

/// f0(x) = sum_k nu_k lambda_k° g_k(x).
std::vector<Complex> target_function(const SparsificationInstance& inst);

/// Smallest L with 16p / (eps^2 L) < 1.
std::uint64_t choose_L(double p, double eps);

/// (1/L) sum_l lambda°_{k_l} g_{k_l}(x) at every point. Indices are 0-based.
std::vector<Complex> empirical_approximant(std::span<const std::size_t> tuple,
                                           const SparsificationInstance& inst);

/// Integral of |f0 - approximant|^p; the p-th power, not the norm.
double approximation_error(std::span<const std::size_t> tuple, const SparsificationInstance& inst);

struct SparsificationResult {
  std::vector<std::size_t> tuple;
  std::uint64_t L = 0;
  double p = 0.0;
  double eps = 0.0;
  double eps_p = 0.0;
  double error_p = 0.0;
  std::uint64_t attempts = 0;
  std::uint64_t seed = 0;
};

/// Rejection sampling over nu^L for a caller-chosen L and any eps > 0.
/// Position l of attempt a draws from the counter (seed; a, l); the accepted
/// witness is the lowest-numbered successful attempt, whatever `threads` is.
/// Throws MaxAttemptsExceeded when no attempt succeeds.
SparsificationResult find_witness(const SparsificationInstance& inst, double eps, std::uint64_t L,
                                  std::uint64_t seed, std::uint64_t max_attempts,
                                  unsigned threads = 1);

/// find_witness with L = choose_L(p, eps), for eps in (0, 1].
SparsificationResult sparsify(const SparsificationInstance& inst, double eps, std::uint64_t seed,
                              std::uint64_t max_attempts = kDefaultMaxAttempts,
                              unsigned threads = 1);

/// Exact E over nu^L of approximation_error, by enumerating index tuples.
double expected_error_exhaustive(const SparsificationInstance& inst, std::uint64_t L,
                                 unsigned threads = 1, std::uint64_t cap = kMaxIndexTuples);

/// Exact nu^L-measure of the tuples whose error exceeds eps^p. Any eps > 0.
double bad_set_measure_exhaustive(const SparsificationInstance& inst, double eps, std::uint64_t L,
                                  unsigned threads = 1, std::uint64_t cap = kMaxIndexTuples);

struct TupleStatistics {
  double expected_error = 0.0;
  double bad_measure = 0.0;
};

/// Both exhaustive quantities in one enumeration.
TupleStatistics tuple_statistics_exhaustive(const SparsificationInstance& inst, double eps,
                                            std::uint64_t L, unsigned threads = 1,
                                            std::uint64_t cap = kMaxIndexTuples);

struct BadSetBounds {
  double stated = 0.0;  // min(1, sqrt(16p / (eps^2 L)))
  double markov = 0.0;  // min(1, (16p / (eps^2 L))^(p/2)), reported only
};

BadSetBounds bad_set_bounds(double p, double eps, std::uint64_t L);

/// (16p / L)^(p/2)
double expected_error_bound(double p, std::uint64_t L);

struct TupleMonteCarlo {
  std::uint64_t samples = 0;
  double mean_error = 0.0;
  double error_stderr = 0.0;
  double bad_frequency = 0.0;
};

/// Draws `samples` tuples from nu^L (sample s, position l uses counter (seed; s, l, 1)).
TupleMonteCarlo tuple_monte_carlo(const SparsificationInstance& inst, double eps, std::uint64_t L,
                                  std::uint64_t samples, std::uint64_t seed, unsigned threads = 1);

}  // namespace clsparse
