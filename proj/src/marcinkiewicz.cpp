#include "clsparse/marcinkiewicz.hpp"

#include <cmath>
#include <sstream>

#include "clsparse/compensated_sum.hpp"
#include "clsparse/counter_rng.hpp"
#include "clsparse/error.hpp"
#include "clsparse/parallel.hpp"
#include "clsparse/running_moments.hpp"

namespace clsparse {

namespace {

constexpr std::uint64_t kTupleBlock = 1u << 16;
constexpr std::uint64_t kSampleBlock = 1u << 12;

double root_power(double sq, double p) {
  // (sum |f|^2)^(p/2)
  if (p == 2.0) return sq;
  return std::pow(sq, p / 2.0);
}

double abs_power(Complex z, double p) {
  if (p == 2.0) return std::norm(z);
  return std::pow(std::abs(z), p);
}

void require_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "exponent p must be a finite real >= 1, got " << p;
    throw Error(ErrorCode::PLessThanOne, msg.str());
  }
}

}  // namespace

std::uint64_t product_size_within(std::size_t m, std::size_t n, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (m != 0 && total > cap / m) return 0;
    total *= m;
  }
  return total <= cap ? total : 0;
}

CenteredFamily make_centered_family(DiscreteProbabilitySpace space,
                                    const std::vector<std::vector<Complex>>& rows, double p) {
  require_p(p);
  if (rows.empty()) throw Error(ErrorCode::ShapeMismatch, "a family needs at least one function");
  const std::size_t m = space.size();
  std::vector<Complex> values;
  values.reserve(rows.size() * m);
  const auto residuals = center_check(space, rows);
  for (std::size_t n = 0; n < rows.size(); ++n) {
    for (const Complex& z : rows[n]) {
      if (!is_finite(z)) {
        throw Error(ErrorCode::NonFinite, "function " + std::to_string(n) + " has a non-finite value");
      }
    }
    if (residuals[n] > kCenterTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "function " << n << " has mean of modulus " << residuals[n]
          << ", exceeding the centering tolerance " << kCenterTolerance;
      throw Error(ErrorCode::NotCentered, msg.str());
    }
    values.insert(values.end(), rows[n].begin(), rows[n].end());
  }
  return CenteredFamily(std::move(space), rows.size(), std::move(values), p);
}

std::vector<double> center_check(const DiscreteProbabilitySpace& space,
                                 const std::vector<std::vector<Complex>>& rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(std::abs(weighted_mean(space, row)));
  return out;
}

double mz_constant(double p) { return std::pow(4.0 * p, p / 2.0); }

ProductIntegrals product_integrals(const DiscreteProbabilitySpace& space,
                                   std::span<const Complex> rows, std::size_t n_rows, double p,
                                   unsigned threads, std::uint64_t cap) {
  require_p(p);
  const std::size_t m = space.size();
  if (n_rows == 0 || rows.size() != n_rows * m) {
    throw Error(ErrorCode::ShapeMismatch, "product integral needs an N x M table with N >= 1");
  }
  const std::uint64_t total = product_size_within(m, n_rows, cap);
  if (total == 0) {
    std::ostringstream msg;
    msg << m << "^" << n_rows << " tuples exceed the enumeration cap " << cap;
    throw Error(ErrorCode::CapExceeded, msg.str());
  }

  const std::uint64_t blocks = (total + kTupleBlock - 1) / kTupleBlock;
  std::vector<ProductIntegrals> partial(blocks);

  parallel_blocks(blocks, threads, [&](std::size_t block) {
    const std::uint64_t begin = block * kTupleBlock;
    const std::uint64_t end = std::min(total, begin + kTupleBlock);

    // Coordinate n_rows-1 is the least significant digit, so prefix state
    // for the leading coordinates is reused across the inner sweep.
    std::vector<std::size_t> digit(n_rows);
    std::uint64_t rest = begin;
    for (std::size_t n = n_rows; n-- > 0;) {
      digit[n] = rest % m;
      rest /= m;
    }
    std::vector<Complex> prefix_sum(n_rows + 1);
    std::vector<double> prefix_sq(n_rows + 1);
    std::vector<double> prefix_weight(n_rows + 1);
    prefix_weight[0] = 1.0;
    auto rebuild_from = [&](std::size_t from) {
      for (std::size_t n = from; n < n_rows; ++n) {
        const Complex v = rows[n * m + digit[n]];
        prefix_sum[n + 1] = prefix_sum[n] + v;
        prefix_sq[n + 1] = prefix_sq[n] + std::norm(v);
        prefix_weight[n + 1] = prefix_weight[n] * space.weight(digit[n]);
      }
    };
    rebuild_from(0);

    CompensatedSum lhs;
    CompensatedSum rhs;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const double w = prefix_weight[n_rows];
      if (w != 0.0) {
        lhs.add(w * abs_power(prefix_sum[n_rows], p));
        rhs.add(w * root_power(prefix_sq[n_rows], p));
      }
      if (idx + 1 == end) break;
      std::size_t pos = n_rows - 1;
      while (++digit[pos] == m) {
        digit[pos] = 0;
        --pos;
      }
      rebuild_from(pos);
    }
    partial[block] = {lhs.value(), rhs.value()};
  });

  CompensatedSum lhs;
  CompensatedSum rhs;
  for (const auto& part : partial) {
    lhs.add(part.lhs);
    rhs.add(part.rhs_core);
  }
  return {lhs.value(), rhs.value()};
}

ProductIntegrals mz_integrals_exhaustive(const CenteredFamily& fam, unsigned threads,
                                         std::uint64_t cap) {
  return product_integrals(fam.space(), fam.values(), fam.size(), fam.p(), threads, cap);
}

double mz_lhs_exhaustive(const CenteredFamily& fam, unsigned threads, std::uint64_t cap) {
  return mz_integrals_exhaustive(fam, threads, cap).lhs;
}

double mz_rhs_exhaustive(const CenteredFamily& fam, unsigned threads, std::uint64_t cap) {
  return mz_integrals_exhaustive(fam, threads, cap).rhs_core;
}

MZReport mz_report_exhaustive(const CenteredFamily& fam, unsigned threads, std::uint64_t cap) {
  const auto integrals = mz_integrals_exhaustive(fam, threads, cap);
  MZReport report;
  report.p = fam.p();
  report.lhs = integrals.lhs;
  report.rhs_core = integrals.rhs_core;
  report.bound = mz_constant(fam.p()) * integrals.rhs_core;
  report.method = EstimateMethod::Exhaustive;
  report.samples = product_size_within(fam.points(), fam.size(), cap);
  report.ratio = report.bound > 0.0 ? report.lhs / report.bound : 0.0;
  report.core_ratio = report.rhs_core > 0.0 ? report.lhs / report.rhs_core : 0.0;
  report.pass = report.lhs <= report.bound * (1.0 + 1e-9);
  return report;
}

MZReport mz_monte_carlo(const CenteredFamily& fam, std::uint64_t samples, std::uint64_t seed,
                        unsigned threads) {
  if (samples < kMinMonteCarloSamples) {
    std::ostringstream msg;
    msg << "Monte Carlo needs at least " << kMinMonteCarloSamples << " samples, got " << samples;
    throw Error(ErrorCode::TooFewSamples, msg.str());
  }
  const CounterRng rng(seed);
  const std::size_t m = fam.points();
  const std::size_t n_rows = fam.size();
  const double p = fam.p();
  const auto& space = fam.space();

  const std::uint64_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<RunningMoments> lhs_part(blocks);
  std::vector<RunningMoments> rhs_part(blocks);
  parallel_blocks(blocks, threads, [&](std::size_t block) {
    const std::uint64_t begin = block * kSampleBlock;
    const std::uint64_t end = std::min(samples, begin + kSampleBlock);
    for (std::uint64_t s = begin; s < end; ++s) {
      Complex sum{};
      double sq = 0.0;
      for (std::size_t n = 0; n < n_rows; ++n) {
        const std::size_t j = space.sample_index(rng.uniform(s, static_cast<std::uint32_t>(n)));
        const Complex v = fam.values()[n * m + j];
        sum += v;
        sq += std::norm(v);
      }
      lhs_part[block].add(abs_power(sum, p));
      rhs_part[block].add(root_power(sq, p));
    }
  });
  RunningMoments lhs;
  RunningMoments rhs;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    lhs.merge(lhs_part[b]);
    rhs.merge(rhs_part[b]);
  }

  MZReport report;
  report.p = p;
  report.method = EstimateMethod::MonteCarlo;
  report.samples = samples;
  report.lhs = lhs.mean();
  report.rhs_core = rhs.mean();
  report.lhs_stderr = lhs.standard_error();
  report.rhs_stderr = rhs.standard_error();
  const double constant = mz_constant(p);
  report.bound = constant * report.rhs_core;
  report.ratio = report.bound > 0.0 ? report.lhs / report.bound : 0.0;
  report.core_ratio = report.rhs_core > 0.0 ? report.lhs / report.rhs_core : 0.0;
  const double combined = std::hypot(report.lhs_stderr, constant * report.rhs_stderr);
  report.pass = report.lhs <= report.bound + 3.0 * combined;
  return report;
}

SymmetrizationResult symmetrization_lhs(const CenteredFamily& fam, unsigned threads,
                                        std::uint64_t cap) {
  const std::size_t m = fam.points();
  const std::size_t n_rows = fam.size();
  if (product_size_within(m, 2 * n_rows, cap) == 0) {
    std::ostringstream msg;
    msg << m << "^" << 2 * n_rows << " tuples exceed the enumeration cap " << cap;
    throw Error(ErrorCode::CapExceeded, msg.str());
  }
  // Coordinate 2n-1 carries -f_n and coordinate 2n carries +f_n (1-based).
  std::vector<Complex> doubled;
  doubled.reserve(2 * n_rows * m);
  for (std::size_t n = 0; n < n_rows; ++n) {
    for (const Complex& z : fam.row(n)) doubled.push_back(-z);
    const auto row = fam.row(n);
    doubled.insert(doubled.end(), row.begin(), row.end());
  }
  SymmetrizationResult out;
  out.original = mz_lhs_exhaustive(fam, threads, cap);
  out.symmetrized =
      product_integrals(fam.space(), doubled, 2 * n_rows, fam.p(), threads, cap).lhs;
  out.holds = out.original <= out.symmetrized * (1.0 + 1e-9);
  return out;
}

}  // namespace clsparse
