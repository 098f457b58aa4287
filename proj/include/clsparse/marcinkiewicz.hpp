#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "clsparse/core_space.hpp"

namespace clsparse {

inline constexpr std::uint64_t kMaxProductTuples = 10'000'000;
inline constexpr double kCenterTolerance = 1e-10;
inline constexpr std::uint64_t kMinMonteCarloSamples = 100;

/// N functions on a common space, each with mean zero (within kCenterTolerance).
class CenteredFamily {
 public:
  const DiscreteProbabilitySpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return rows_; }
  std::size_t points() const noexcept { return space_.size(); }
  double p() const noexcept { return p_; }
  std::span<const Complex> row(std::size_t n) const {
    return {values_.data() + n * space_.size(), space_.size()};
  }
  std::span<const Complex> values() const noexcept { return values_; }

 private:
  friend CenteredFamily make_centered_family(DiscreteProbabilitySpace,
                                             const std::vector<std::vector<Complex>>&, double);
  CenteredFamily(DiscreteProbabilitySpace space, std::size_t rows, std::vector<Complex> values,
                 double p)
      : space_(std::move(space)), rows_(rows), p_(p), values_(std::move(values)) {}

  DiscreteProbabilitySpace space_;
  std::size_t rows_;
  double p_;
  std::vector<Complex> values_;
};

/// Throws ShapeMismatch, NonFinite, PLessThanOne or NotCentered (naming the row).
CenteredFamily make_centered_family(DiscreteProbabilitySpace space,
                                    const std::vector<std::vector<Complex>>& rows, double p);

/// |weighted_mean(space, row)| for every row.
std::vector<double> center_check(const DiscreteProbabilitySpace& space,
                                 const std::vector<std::vector<Complex>>& rows);

/// (4p)^(p/2)
double mz_constant(double p);

struct ProductIntegrals {
  double lhs = 0.0;       // integral of |sum_n f_n(x_n)|^p over X^N
  double rhs_core = 0.0;  // integral of (sum_n |f_n(x_n)|^2)^(p/2) over X^N
};

/// Both sides in one odometer pass over all M^N tuples.
ProductIntegrals mz_integrals_exhaustive(const CenteredFamily& fam, unsigned threads = 1,
                                         std::uint64_t cap = kMaxProductTuples);
double mz_lhs_exhaustive(const CenteredFamily& fam, unsigned threads = 1,
                         std::uint64_t cap = kMaxProductTuples);
double mz_rhs_exhaustive(const CenteredFamily& fam, unsigned threads = 1,
                         std::uint64_t cap = kMaxProductTuples);

enum class EstimateMethod { Exhaustive, MonteCarlo };

struct MZReport {
  double p = 0.0;
  double lhs = 0.0;
  double rhs_core = 0.0;
  double bound = 0.0;  // (4p)^(p/2) * rhs_core
  EstimateMethod method = EstimateMethod::Exhaustive;
  std::uint64_t samples = 0;  // tuples visited or drawn
  double lhs_stderr = 0.0;
  double rhs_stderr = 0.0;
  double ratio = 0.0;       // lhs / bound
  double core_ratio = 0.0;  // lhs / rhs_core; exactly 1 at p = 2
  bool pass = false;
};

MZReport mz_report_exhaustive(const CenteredFamily& fam, unsigned threads = 1,
                              std::uint64_t cap = kMaxProductTuples);

/// Sample means of both integrands over `samples` tuples drawn from mu^N.
/// Coordinate n of sample s uses the counter (seed; s, n), so the estimate is
/// a pure function of (fam, samples, seed). Passes when lhs exceeds the bound
/// by at most three combined standard errors.
MZReport mz_monte_carlo(const CenteredFamily& fam, std::uint64_t samples, std::uint64_t seed,
                        unsigned threads = 1);

struct SymmetrizationResult {
  double original = 0.0;     // integral of |sum_n f_n(x_n)|^p over X^N
  double symmetrized = 0.0;  // integral of |sum_{n<=2N} (-1)^n f_ceil(n/2)(x_n)|^p over X^2N
  bool holds = false;        // original <= symmetrized * (1 + 1e-9)
};

SymmetrizationResult symmetrization_lhs(const CenteredFamily& fam, unsigned threads = 1,
                                        std::uint64_t cap = kMaxProductTuples);

/// Integrals of |sum_n rows_n(x_n)|^p and (sum_n |rows_n(x_n)|^2)^(p/2) over
/// the product space, for any N x M table (no centering required).
ProductIntegrals product_integrals(const DiscreteProbabilitySpace& space,
                                   std::span<const Complex> rows, std::size_t n_rows, double p,
                                   unsigned threads = 1, std::uint64_t cap = kMaxProductTuples);

/// M^N, or nullopt-like 0 when it exceeds `cap`.
std::uint64_t product_size_within(std::size_t m, std::size_t n, std::uint64_t cap);

}  // namespace clsparse
