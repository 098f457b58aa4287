#pragma once

#include <cstdint>
#include <vector>

#include "clsparse/counter_rng.hpp"
#include "clsparse/instance_io.hpp"
#include "clsparse/khintchine.hpp"
#include "clsparse/marcinkiewicz.hpp"

namespace clsparse {

/// Sequential draws from the counter stream (seed; trial, 0, 1, ...).
class TrialDraws {
 public:
  TrialDraws(std::uint64_t seed, std::uint64_t trial) : rng_(seed), trial_(trial) {}

  double uniform() { return rng_.uniform(trial_, next_++, 0x7a11u); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Integer uniform on [lo, hi].
  int between(int lo, int hi);
  bool chance(double probability) { return uniform() < probability; }
  Complex complex_in_box(double half_width);

 private:
  CounterRng rng_;
  std::uint64_t trial_;
  std::uint32_t next_ = 0;
};

// Instance recipes. Each is a pure function of (seed, trial, limits).

/// N uniform on [1, n_max]; entries uniform on [-1, 1], occasionally all equal.
std::vector<double> random_rademacher_coefficients(std::uint64_t seed, std::uint64_t trial,
                                                   int n_max);

/// N uniform on [1, n_max]; entries a/b with a in [-9, 9], b in [1, 9].
std::vector<Rational> random_rational_coefficients(std::uint64_t seed, std::uint64_t trial,
                                                   int n_max);

/// Weights uniform on (0, 1] normalized onto the simplex.
DiscreteProbabilitySpace random_space(TrialDraws& draws, std::size_t m);

struct FamilyData {
  DiscreteProbabilitySpace space;
  std::vector<std::vector<Complex>> rows;
};

/// M uniform on [2, m_max], N on [1, n_max]; rows drawn from the complex
/// unit box then centered by subtracting their weighted mean.
FamilyData random_centered_family(std::uint64_t seed, std::uint64_t trial, int m_max, int n_max);

/// M on [1, m_max], K on [1, k_max]. Rows are drawn in the complex box,
/// normalized onto the unit L^p sphere and scaled by 1 or a uniform factor
/// in [0.1, 1]. Coefficients are uniform in the complex box with some
/// entries zeroed, never all of them.
InstanceData random_sparsification_data(std::uint64_t seed, std::uint64_t trial, int k_max,
                                        int m_max, double p);

}  // namespace clsparse
