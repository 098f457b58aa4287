#include "clsparse/generators.hpp"

#include <algorithm>
#include <cmath>

namespace clsparse {

int TrialDraws::between(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  const auto bits = rng_.bits(trial_, next_++, 0x7a11u);
  // Range is tiny, so modulo bias is negligible.
  return lo + static_cast<int>(bits % span);
}

Complex TrialDraws::complex_in_box(double half_width) {
  const double re = uniform(-half_width, half_width);
  const double im = uniform(-half_width, half_width);
  return {re, im};
}

std::vector<double> random_rademacher_coefficients(std::uint64_t seed, std::uint64_t trial,
                                                   int n_max) {
  TrialDraws draws(seed, trial);
  const int n = draws.between(1, n_max);
  std::vector<double> c(static_cast<std::size_t>(n));
  if (draws.chance(0.1)) {
    const double value = draws.uniform(0.1, 1.0);
    std::fill(c.begin(), c.end(), value);
    return c;
  }
  for (double& x : c) x = draws.uniform(-1.0, 1.0);
  return c;
}

std::vector<Rational> random_rational_coefficients(std::uint64_t seed, std::uint64_t trial,
                                                   int n_max) {
  TrialDraws draws(seed, trial);
  const int n = draws.between(1, n_max);
  std::vector<Rational> c;
  c.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int num = draws.between(-9, 9);
    const int den = draws.between(1, 9);
    c.emplace_back(num, den);
  }
  return c;
}

DiscreteProbabilitySpace random_space(TrialDraws& draws, std::size_t m) {
  std::vector<double> raw(m);
  for (double& w : raw) w = 1.0 - draws.uniform();  // (0, 1]
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < m; ++j) labels.push_back("x" + std::to_string(j));
  return make_space(std::move(labels), renormalize_weights(raw));
}

FamilyData random_centered_family(std::uint64_t seed, std::uint64_t trial, int m_max, int n_max) {
  TrialDraws draws(seed, trial);
  const auto m = static_cast<std::size_t>(draws.between(2, std::max(2, m_max)));
  const int n = draws.between(1, n_max);
  auto space = random_space(draws, m);
  std::vector<std::vector<Complex>> rows;
  for (int i = 0; i < n; ++i) {
    std::vector<Complex> row(m);
    const bool real_only = draws.chance(0.3);
    for (Complex& z : row) {
      z = draws.complex_in_box(1.0);
      if (real_only) z.imag(0.0);
    }
    const Complex mean = weighted_mean(space, row);
    for (Complex& z : row) z -= mean;
    rows.push_back(std::move(row));
  }
  return {std::move(space), std::move(rows)};
}

InstanceData random_sparsification_data(std::uint64_t seed, std::uint64_t trial, int k_max,
                                        int m_max, double p) {
  TrialDraws draws(seed, trial);
  const auto m = static_cast<std::size_t>(draws.between(1, m_max));
  const auto k = static_cast<std::size_t>(draws.between(1, k_max));
  const auto space = random_space(draws, m);

  InstanceData data;
  data.points = space.labels();
  data.weights = space.weights();
  data.p = p;
  for (std::size_t row = 0; row < k; ++row) {
    std::vector<Complex> values(m);
    for (Complex& z : values) z = draws.complex_in_box(1.0);
    const double norm = lp_norm(space, values, p);
    const double scale = draws.chance(0.5) ? 1.0 : draws.uniform(0.1, 1.0);
    for (Complex& z : values) z = norm > 0.0 ? z * (scale / norm) : Complex{scale, 0.0};
    data.functions.push_back(std::move(values));
  }
  bool any = false;
  for (std::size_t i = 0; i < k; ++i) {
    Complex z = draws.complex_in_box(2.0);
    if (k > 1 && draws.chance(0.15)) z = {};
    any = any || z != Complex{};
    data.lambda.push_back(z);
  }
  if (!any) data.lambda[0] = {1.0, 0.0};
  return data;
}

}  // namespace clsparse
