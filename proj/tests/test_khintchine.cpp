#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "clsparse/error.hpp"
#include "clsparse/khintchine.hpp"
#include "oracles.hpp"

using namespace clsparse;

namespace {

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> random_coefficients(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> c(n);
  for (double& x : c) x = u(gen);
  return c;
}

}  // namespace

TEST_CASE("exhaustive Rademacher moments: examples") {
  CHECK(khintchine_sum_exhaustive(std::vector<double>{1.0}, 2.0) == doctest::Approx(1.0));
  CHECK(khintchine_sum_exhaustive(std::vector<double>{1.0, 1.0}, 4.0) == doctest::Approx(8.0));
  CHECK(khintchine_sum_exhaustive(std::vector<double>{3.0, 4.0}, 2.0) == doctest::Approx(25.0));
  // Frozen from the brute-force oracle: c=(1,1), p=4 -> (16+0+0+16)/4.
  CHECK(oracle::rademacher_moment({1.0, 1.0}, 4.0) == 8.0);
}

TEST_CASE("exhaustive Rademacher moments match brute force") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto c = random_coefficients(gen, 1 + trial % 14);
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0, 7.25}) {
      CHECK(rel_gap(khintchine_sum_exhaustive(c, p), oracle::rademacher_moment(c, p)) <= 1e-12);
    }
  }
}

TEST_CASE("Gray-code segments give identical results for any thread count") {
  std::mt19937_64 gen(77);
  const auto c = random_coefficients(gen, 18);
  const double one = khintchine_sum_exhaustive(c, 3.0, 1);
  CHECK(khintchine_sum_exhaustive(c, 3.0, 4) == one);
  CHECK(khintchine_sum_exhaustive(c, 3.0, 7) == one);
}

TEST_CASE("exhaustive path errors") {
  const std::vector<double> long_c(25, 1.0);
  CHECK_THROWS_AS(khintchine_sum_exhaustive(long_c, 2.0), Error);
  try {
    khintchine_sum_exhaustive(long_c, 2.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapExceeded);
  }
  try {
    khintchine_sum_exhaustive(std::vector<double>{1.0}, 0.5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PLessThanOne);
  }
  CHECK_THROWS_AS(khintchine_sum_exhaustive(std::vector<double>{}, 2.0), Error);
}

TEST_CASE("equal coefficients: fourth moment identity 3N^2 - 2N") {
  for (int n : {1, 2, 5, 9, 16}) {
    const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
    CHECK(khintchine_sum_exhaustive(ones, 4.0) == doctest::Approx(3.0 * n * n - 2.0 * n));
  }
  const std::vector<double> scaled(16, 0.25);
  CHECK(std::abs(khintchine_sum_exhaustive(scaled, 4.0) - 2.875) <= 1e-10);
}

TEST_CASE("even-moment expansion examples") {
  CHECK(khintchine_sum_even_exact(std::vector<Rational>{1, 1}, 2) == 8);
  CHECK(khintchine_sum_even_exact(std::vector<Rational>{1}, 1) == 1);
  CHECK(khintchine_sum_even_exact(std::vector<Rational>{1, 1, 1}, 1) == 3);
  const std::vector<Rational> halves{Rational(1, 2), Rational(-1, 3)};
  // S(2) = 1/4 + 1/9
  CHECK(khintchine_sum_even_exact(halves, 1) == Rational(13, 36));
}

TEST_CASE("even-moment expansion agrees with enumeration") {
  std::mt19937_64 gen(314);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 12);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 10;
    std::vector<Rational> exact;
    std::vector<double> approx;
    for (int i = 0; i < n; ++i) {
      exact.emplace_back(num(gen), den(gen));
      approx.push_back(static_cast<double>(exact.back()));
    }
    for (int k = 1; k <= 4; ++k) {
      const double e = static_cast<double>(khintchine_sum_even_exact(exact, k));
      const double x = khintchine_sum_exhaustive(approx, 2.0 * k);
      CHECK(std::abs(e - x) <= 1e-10 * std::max(std::abs(e), 1e-300));
    }
  }
}

TEST_CASE("compositions") {
  int count = 0;
  for_each_composition(3, 3, [&](std::span<const int> t) {
    CHECK(t[0] + t[1] + t[2] == 3);
    ++count;
  });
  CHECK(count == 10);
  CHECK(composition_count(3, 3) == 10);
  CHECK(composition_count(4, 12) == 1365);
  CHECK(composition_count(5, 1) == 1);
  const std::vector<int> parts{2, 1, 1};
  CHECK(multinomial(parts) == 12);
}

TEST_CASE("multinomial ratio constant") {
  CHECK(multinomial_ratio_max(1, 2) == 1);
  CHECK(multinomial_ratio_max(2, 2) == 3);
  CHECK(multinomial_ratio_max(2, 1) == 1);

  // Oracle: floating brute force over compositions of small k.
  for (int k = 1; k <= 5; ++k) {
    for (int n = 1; n <= 4; ++n) {
      double best = 0;
      for_each_composition(k, n, [&](std::span<const int> t) {
        double r = oracle::factorial(2 * k) / oracle::factorial(k);
        for (int part : t) r *= oracle::factorial(part) / oracle::factorial(2 * part);
        best = std::max(best, r);
      });
      CHECK(static_cast<double>(multinomial_ratio_max(k, n)) == doctest::Approx(best).epsilon(1e-13));
    }
  }
  // The intermediate estimate C <= (k/2)^k fails already at k = 2.
  CHECK(multinomial_ratio_max(2, 2) > Rational(1));

  try {
    multinomial_ratio_max(30, 30);
    FAIL("expected CapExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapExceeded);
  }
}

TEST_CASE("Haagerup constant") {
  CHECK(haagerup_constant(2.0) == 1.0);
  CHECK(haagerup_constant(0.5) == 1.0);
  CHECK(haagerup_constant(1.0) == 1.0);
  CHECK(haagerup_constant(4.0) == doctest::Approx(std::sqrt(2.0) * std::pow(0.75, 0.25)).epsilon(1e-14));
  CHECK(haagerup_constant(4.0) == doctest::Approx(1.316074).epsilon(1e-6));
  CHECK(haagerup_constant(3.0) == doctest::Approx(std::sqrt(2.0) * std::pow(M_PI, -1.0 / 6.0)).epsilon(1e-14));
  CHECK(haagerup_constant(3.0) == doctest::Approx(1.16858).epsilon(1e-5));
  // Continuity at 2.
  CHECK(std::abs(haagerup_constant(2.0 + 1e-9) - 1.0) < 1e-8);
  try {
    haagerup_constant(0.0);
    FAIL("expected NonpositiveP");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonpositiveP);
  }
}

TEST_CASE("Haagerup constant at even p against half-integer Gamma") {
  for (int n = 2; n <= 40; ++n) {
    const double p = 2.0 * n;
    const double expected = std::sqrt(2.0) * std::pow(oracle::gamma_half_integer(n) / std::sqrt(M_PI), 1.0 / p);
    CHECK(rel_gap(haagerup_constant(p), expected) <= 1e-10);
    CHECK(haagerup_constant(p) <= std::sqrt(p));
  }
}

TEST_CASE("bound check examples") {
  const auto r = khintchine_bound_check({{1.0, 1.0}, 4.0});
  CHECK(r.lhs == doctest::Approx(8.0));
  CHECK(r.bound_theorem == doctest::Approx(64.0));
  CHECK(r.pass_theorem);
  REQUIRE(r.ratio_constant.has_value());
  CHECK(*r.ratio_constant == 3.0);

  const auto one = khintchine_bound_check({{1.0}, 1.0});
  CHECK(one.lhs == 1.0);
  CHECK(one.bound_theorem == 1.0);
  CHECK(one.pass_theorem);

  const auto flat = khintchine_bound_check({std::vector<double>(16, 0.25), 4.0});
  CHECK(flat.lhs == doctest::Approx(2.875));
  CHECK(flat.bound_haagerup == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(flat.pass_haagerup);
}

TEST_CASE("Rademacher moment properties") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> up(1.0, 9.0);
  for (int trial = 0; trial < 80; ++trial) {
    auto c = random_coefficients(gen, 1 + trial % 11);
    double sq = 0;
    for (double x : c) sq += x * x;

    CHECK(rel_gap(khintchine_sum_exhaustive(c, 2.0), sq) <= 1e-12);

    double p1 = up(gen), p2 = up(gen);
    if (p1 > p2) std::swap(p1, p2);
    const double s1 = khintchine_sum_exhaustive(c, p1);
    const double s2 = khintchine_sum_exhaustive(c, p2);
    CHECK(std::pow(s1, 1 / p1) <= std::pow(s2, 1 / p2) * (1 + 1e-10));

    for (double p : {p1, p2}) {
      const double s = khintchine_sum_exhaustive(c, p);
      CHECK(s <= std::pow(p, p / 2) * std::pow(sq, p / 2) * (1 + 1e-9));
      CHECK(std::pow(s, 1 / p) <= haagerup_constant(p) * std::sqrt(sq) * (1 + 1e-9));
    }

    const double base = khintchine_sum_exhaustive(c, p1);
    auto shuffled = c;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    shuffled[0] = -shuffled[0];
    CHECK(rel_gap(khintchine_sum_exhaustive(shuffled, p1), base) <= 1e-12);
    const double t = -1.7;
    for (double& x : shuffled) x *= t;
    CHECK(rel_gap(khintchine_sum_exhaustive(shuffled, p1), std::pow(std::abs(t), p1) * base) <= 1e-10);

    for (int k = 1; k <= 4; ++k) {
      const double bound = static_cast<double>(multinomial_ratio_max(k, static_cast<int>(c.size())));
      CHECK(khintchine_sum_exhaustive(c, 2.0 * k) <= bound * std::pow(sq, k) * (1 + 1e-10));
    }
  }
}
