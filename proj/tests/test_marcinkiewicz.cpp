#include <cmath>
#include <random>

#include <doctest.h>

#include "clsparse/error.hpp"
#include "clsparse/marcinkiewicz.hpp"
#include "oracles.hpp"

using namespace clsparse;

namespace {

DiscreteProbabilitySpace signs() { return make_space({"-1", "+1"}, {0.5, 0.5}); }

const std::vector<Complex> kIdentity{-1.0, 1.0};

std::vector<std::vector<Complex>> random_centered(std::mt19937_64& gen,
                                                  const DiscreteProbabilitySpace& space,
                                                  std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<Complex>> rows(n, std::vector<Complex>(space.size()));
  for (auto& row : rows) {
    for (auto& z : row) z = {u(gen), u(gen)};
    const Complex mean = weighted_mean(space, row);
    for (auto& z : row) z -= mean;
  }
  return rows;
}

DiscreteProbabilitySpace random_space(std::mt19937_64& gen, std::size_t m) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(m);
  for (double& x : w) x = u(gen);
  return make_space(std::vector<std::string>(m, "x"), renormalize_weights(w));
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("center_check") {
  CHECK(center_check(uniform_space(2), {{1, -1}})[0] == 0.0);
  CHECK(center_check(uniform_space(2), {{1, 1}})[0] == 1.0);
  const auto third = make_space({"a", "b"}, {1.0 / 3.0, 2.0 / 3.0});
  CHECK(center_check(third, {{2, -1}})[0] <= 1e-15);
  try {
    make_centered_family(uniform_space(2), {{1, -1}, {1, 1}}, 2.0);
    FAIL("expected NotCentered");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCentered);
    CHECK(std::string(e.what()).find("function 1") != std::string::npos);
  }
}

TEST_CASE("exhaustive integrals: examples") {
  const auto one = make_centered_family(signs(), {kIdentity}, 2.0);
  CHECK(mz_lhs_exhaustive(one) == doctest::Approx(1.0));
  CHECK(mz_rhs_exhaustive(one) == doctest::Approx(1.0));

  const auto two = make_centered_family(signs(), {kIdentity, kIdentity}, 2.0);
  CHECK(mz_lhs_exhaustive(two) == doctest::Approx(2.0));
  CHECK(mz_rhs_exhaustive(two) == doctest::Approx(2.0));

  const auto zero = make_centered_family(uniform_space(3), {{0, 0, 0}, {0, 0, 0}}, 3.0);
  CHECK(mz_lhs_exhaustive(zero) == 0.0);
  CHECK(mz_rhs_exhaustive(zero) == 0.0);
}

TEST_CASE("exhaustive integrals match the recursive oracle") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 40; ++trial) {
    const auto space = random_space(gen, 2 + trial % 3);
    const auto rows = random_centered(gen, space, 1 + trial % 6);
    for (double p : {1.0, 2.0, 3.0, 4.5}) {
      const auto fam = make_centered_family(space, rows, p);
      const auto both = mz_integrals_exhaustive(fam);
      CHECK(rel_gap(both.lhs, oracle::product_lhs(space.weights(), rows, p)) <= 1e-12);
      CHECK(rel_gap(both.rhs_core, oracle::product_rhs(space.weights(), rows, p)) <= 1e-12);
    }
  }
}

TEST_CASE("block partitioning does not change results") {
  std::mt19937_64 gen(21);
  const auto space = random_space(gen, 3);
  const auto fam = make_centered_family(space, random_centered(gen, space, 12), 3.0);
  const auto serial = mz_integrals_exhaustive(fam, 1);
  const auto threaded = mz_integrals_exhaustive(fam, 5);
  CHECK(serial.lhs == threaded.lhs);
  CHECK(serial.rhs_core == threaded.rhs_core);
}

TEST_CASE("enumeration cap") {
  const auto fam = make_centered_family(uniform_space(2), std::vector<std::vector<Complex>>(30, {1, -1}), 2.0);
  try {
    mz_lhs_exhaustive(fam);
    FAIL("expected CapExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapExceeded);
  }
}

TEST_CASE("symmetrization examples") {
  const auto zero = make_centered_family(uniform_space(2), {{0, 0}}, 2.0);
  const auto z = symmetrization_lhs(zero);
  CHECK(z.original == 0.0);
  CHECK(z.symmetrized == 0.0);
  CHECK(z.holds);

  const auto p2 = symmetrization_lhs(make_centered_family(signs(), {kIdentity}, 2.0));
  CHECK(p2.original == doctest::Approx(1.0));
  CHECK(p2.symmetrized == doctest::Approx(2.0));

  const auto p4 = symmetrization_lhs(make_centered_family(signs(), {kIdentity}, 4.0));
  CHECK(p4.original == doctest::Approx(1.0));
  CHECK(p4.symmetrized == doctest::Approx(8.0));
}

TEST_CASE("Theorem-level bound and symmetrization on random families") {
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 60; ++trial) {
    const auto space = random_space(gen, 1 + trial % 3);
    const auto rows = random_centered(gen, space, 1 + trial % 5);
    for (double p : {1.0, 2.0, 3.0, 4.0, 6.0}) {
      const auto fam = make_centered_family(space, rows, p);
      const auto report = mz_report_exhaustive(fam);
      CHECK(report.pass);
      CHECK(report.lhs <= mz_constant(p) * report.rhs_core * (1 + 1e-9));
      CHECK(symmetrization_lhs(fam).holds);
      if (p == 2.0) CHECK(std::abs(report.lhs - report.rhs_core) <= 1e-10 * report.rhs_core + 1e-300);
    }
  }
}

TEST_CASE("equal functions at p = 2 grow linearly in N") {
  const auto space = make_space({"a", "b", "c"}, {0.2, 0.3, 0.5});
  std::vector<Complex> f{1.0, {0.5, 1.0}, 0.0};
  const Complex mean = weighted_mean(space, f);
  for (auto& z : f) z -= mean;
  const double single = lp_moment(space, f, 2.0);
  for (std::size_t n = 1; n <= 9; ++n) {
    const auto fam = make_centered_family(space, std::vector<std::vector<Complex>>(n, f), 2.0);
    CHECK(rel_gap(mz_lhs_exhaustive(fam), static_cast<double>(n) * single) <= 1e-10);
  }
}

// The intermediate steps of the proof, on tiny instances (N <= 3, M <= 2),
// checked by direct enumeration over signs and X^{2N}.
TEST_CASE("Rademacher averaging and desymmetrization steps") {
  std::mt19937_64 gen(55);
  for (int trial = 0; trial < 12; ++trial) {
    const auto space = random_space(gen, 2);
    const std::size_t n = 1 + trial % 3;
    const auto rows = random_centered(gen, space, n);
    for (double p : {1.0, 2.0, 3.0, 4.0}) {
      // symmetrized integrand over X^{2N}, with signs eps on each pair
      auto signed_pair_integral = [&](std::uint64_t mask) {
        std::vector<std::vector<Complex>> doubled;
        for (std::size_t i = 0; i < n; ++i) {
          const double e = ((mask >> i) & 1u) ? -1.0 : 1.0;
          std::vector<Complex> odd(rows[i]), even(rows[i]);
          for (auto& z : odd) z *= -e;
          for (auto& z : even) z *= e;
          doubled.push_back(odd);
          doubled.push_back(even);
        }
        return oracle::product_lhs(space.weights(), doubled, p);
      };
      const double symmetrized = signed_pair_integral(0);
      double avg_signed = 0;
      double avg_single = 0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const double with_signs = signed_pair_integral(mask);
        // exchanging x_{2n-1} and x_{2n} absorbs every sign
        CHECK(rel_gap(with_signs, symmetrized) <= 1e-12);
        avg_signed += with_signs;
        std::vector<std::vector<Complex>> single;
        for (std::size_t i = 0; i < n; ++i) {
          std::vector<Complex> r(rows[i]);
          if ((mask >> i) & 1u) {
            for (auto& z : r) z = -z;
          }
          single.push_back(r);
        }
        const double half = oracle::product_lhs(space.weights(), single, p);
        // 2^{p-1}(|A|^p + |B|^p) with A, B identically distributed
        CHECK(with_signs <= std::pow(2.0, p) * half * (1 + 1e-12));
        avg_single += half;
      }
      avg_signed /= std::ldexp(1.0, static_cast<int>(n));
      avg_single /= std::ldexp(1.0, static_cast<int>(n));
      CHECK(rel_gap(avg_signed, symmetrized) <= 1e-12);
      const auto fam = make_centered_family(space, rows, p);
      CHECK(std::pow(2.0, p) * avg_single <= mz_constant(p) * mz_rhs_exhaustive(fam) * (1 + 1e-9));
    }
  }
}

TEST_CASE("Monte Carlo estimates") {
  const auto zero = make_centered_family(uniform_space(3), {{0, 0, 0}}, 3.0);
  const auto z = mz_monte_carlo(zero, 1000, 9);
  CHECK(z.lhs == 0.0);
  CHECK(z.pass);

  const auto one = make_centered_family(signs(), {kIdentity}, 2.0);
  const auto r = mz_monte_carlo(one, 100000, 42);
  CHECK(r.method == EstimateMethod::MonteCarlo);
  CHECK(std::abs(r.lhs - 1.0) <= 3 * r.lhs_stderr + 1e-15);

  std::mt19937_64 gen(7);
  const auto space = random_space(gen, 3);
  const auto fam = make_centered_family(space, random_centered(gen, space, 6), 3.0);
  const auto exact = mz_integrals_exhaustive(fam);
  const auto mc = mz_monte_carlo(fam, 20000, 7);
  CHECK(std::abs(mc.lhs - exact.lhs) <= 3 * mc.lhs_stderr);
  CHECK(std::abs(mc.rhs_core - exact.rhs_core) <= 3 * mc.rhs_stderr);

  // Deterministic and independent of threading.
  const auto again = mz_monte_carlo(fam, 20000, 7, 4);
  CHECK(again.lhs == mc.lhs);
  CHECK(again.rhs_core == mc.rhs_core);
  CHECK(again.lhs_stderr == mc.lhs_stderr);

  try {
    mz_monte_carlo(fam, 99, 1);
    FAIL("expected TooFewSamples");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewSamples);
  }
}
