#include "clsparse/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "clsparse/compensated_sum.hpp"
#include "clsparse/counter_rng.hpp"
#include "clsparse/error.hpp"
#include "clsparse/marcinkiewicz.hpp"
#include "clsparse/parallel.hpp"
#include "clsparse/running_moments.hpp"

namespace clsparse {

namespace {

constexpr std::uint64_t kTupleBlock = 1u << 14;
constexpr double kWitnessSlack = 1e-9;

void require_cls_p(double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "sparsification needs a finite p >= 2, got " << p;
    throw Error(ErrorCode::BadP, msg.str());
  }
}

void require_unit_eps(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    std::ostringstream msg;
    msg << "eps must lie in (0, 1], got " << eps;
    throw Error(ErrorCode::BadEpsilon, msg.str());
  }
}

void require_positive_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    std::ostringstream msg;
    msg << "eps must be a finite positive real, got " << eps;
    throw Error(ErrorCode::BadEpsilon, msg.str());
  }
}

void require_tuple(std::span<const std::size_t> tuple, std::size_t terms) {
  if (tuple.empty()) throw Error(ErrorCode::IndexOutOfRange, "index tuple is empty");
  for (std::size_t l = 0; l < tuple.size(); ++l) {
    if (tuple[l] >= terms) {
      std::ostringstream msg;
      msg << "tuple position " << l << " holds index " << tuple[l] << ", but K = " << terms;
      throw Error(ErrorCode::IndexOutOfRange, msg.str());
    }
  }
}

std::vector<Complex> compute_target(const FunctionTable& g, const CoefficientVector& lambda,
                                    const SamplingMeasure& nu) {
  std::vector<Complex> f0(g.cols());
  for (std::size_t j = 0; j < g.cols(); ++j) {
    CompensatedComplexSum acc;
    for (std::size_t k = 0; k < g.rows(); ++k) {
      if (nu.probs[k] == 0.0) continue;
      acc.add(nu.probs[k] * lambda.signum()[k] * g(k, j));
    }
    f0[j] = acc.value();
  }
  return f0;
}

/// Integral of |approx/L - f0|^p, `scaled_sum` holding L * approximant.
double error_integral(const SparsificationInstance& inst, std::span<const Complex> scaled_sum,
                      double L) {
  const auto& space = inst.space();
  const auto f0 = inst.target();
  const double p = inst.p();
  CompensatedSum acc;
  for (std::size_t j = 0; j < f0.size(); ++j) {
    const double w = space.weight(j);
    if (w == 0.0) continue;
    const double gap = std::abs(scaled_sum[j] / L - f0[j]);
    acc.add(w * (p == 2.0 ? gap * gap : std::pow(gap, p)));
  }
  return acc.value();
}

/// L * approximant, grouping repeated indices.
std::vector<Complex> scaled_approximant(std::span<const std::size_t> tuple,
                                        const SparsificationInstance& inst) {
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t k : tuple) ++counts[k];
  std::vector<Complex> out(inst.points());
  for (std::size_t j = 0; j < out.size(); ++j) {
    CompensatedComplexSum acc;
    for (const auto& [k, count] : counts) {
      acc.add(static_cast<double>(count) * inst.signed_row(k)[j]);
    }
    out[j] = acc.value();
  }
  return out;
}

void draw_tuple(const SamplingMeasure& nu, const CounterRng& rng, std::uint64_t stream,
                std::uint32_t lane, std::vector<std::size_t>& tuple) {
  for (std::size_t l = 0; l < tuple.size(); ++l) {
    tuple[l] = nu.sample(rng.uniform(stream, static_cast<std::uint32_t>(l), lane));
  }
}

}  // namespace

std::size_t SamplingMeasure::sample(double u) const {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return static_cast<std::size_t>(
      std::min(it - cumulative.begin(), static_cast<std::ptrdiff_t>(cumulative.size() - 1)));
}

SamplingMeasure sampling_measure(const CoefficientVector& lambda) {
  if (!(lambda.l1_norm() > 0.0)) {
    throw Error(ErrorCode::ZeroCoefficients, "sampling measure needs a nonzero coefficient vector");
  }
  SamplingMeasure nu;
  nu.probs.reserve(lambda.size());
  for (const Complex& z : lambda.lambda()) nu.probs.push_back(std::abs(z) / lambda.l1_norm());
  nu.cumulative.resize(nu.probs.size());
  CompensatedSum running;
  for (std::size_t k = 0; k < nu.probs.size(); ++k) {
    running.add(nu.probs[k]);
    nu.cumulative[k] = running.value();
  }
  for (std::size_t k = nu.probs.size(); k-- > 0;) {
    nu.cumulative[k] = 1.0;
    if (nu.probs[k] > 0.0) break;
  }
  return nu;
}

SparsificationInstance::SparsificationInstance(DiscreteProbabilitySpace space,
                                               FunctionTable functions, CoefficientVector lambda,
                                               double p)
    : space_(std::move(space)),
      functions_(std::move(functions)),
      lambda_(std::move(lambda)),
      p_(p),
      measure_(sampling_measure(lambda_)) {
  const std::size_t m = space_.size();
  signed_rows_.resize(functions_.rows() * m);
  for (std::size_t k = 0; k < functions_.rows(); ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      signed_rows_[k * m + j] = lambda_.signum()[k] * functions_(k, j);
    }
  }
  target_ = compute_target(functions_, lambda_, measure_);
}

SparsificationInstance make_instance(DiscreteProbabilitySpace space, FunctionTable functions,
                                     CoefficientVector lambda, double p) {
  require_cls_p(p);
  if (functions.rows() == 0) throw Error(ErrorCode::ShapeMismatch, "need at least one function");
  if (functions.cols() != space.size()) {
    std::ostringstream msg;
    msg << "function table has " << functions.cols() << " columns but the space has "
        << space.size() << " points";
    throw Error(ErrorCode::ShapeMismatch, msg.str());
  }
  if (functions.rows() != lambda.size()) {
    std::ostringstream msg;
    msg << functions.rows() << " functions but " << lambda.size() << " coefficients";
    throw Error(ErrorCode::ShapeMismatch, msg.str());
  }
  if (functions.certified_p() != p) {
    for (std::size_t k = 0; k < functions.rows(); ++k) {
      const double norm = lp_norm(space, functions.row(k), p);
      if (norm > 1.0 + kNormSlack) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "function row " << k << " has L^" << p << " norm " << norm << " > 1";
        throw Error(ErrorCode::NormExceeded, msg.str());
      }
    }
  }
  return SparsificationInstance(std::move(space), std::move(functions), std::move(lambda), p);
}

std::vector<Complex> target_function(const SparsificationInstance& inst) {
  return compute_target(inst.functions(), inst.lambda(), inst.measure());
}

std::uint64_t choose_L(double p, double eps) {
  require_cls_p(p);
  require_unit_eps(eps);
  const double ratio = 16.0 * p / (eps * eps);
  auto L = static_cast<std::uint64_t>(std::floor(ratio)) + 1;
  // Guard against the quotient rounding across an integer.
  while (16.0 * p / (eps * eps * static_cast<double>(L)) >= 1.0) ++L;
  while (L > 1 && 16.0 * p / (eps * eps * static_cast<double>(L - 1)) < 1.0) --L;
  const auto slack = static_cast<std::uint64_t>(std::ceil(20.0 * p / (eps * eps)));
  if (L > slack) {
    throw std::logic_error("choose_L: L = " + std::to_string(L) + " exceeds ceil(20p/eps^2)");
  }
  return L;
}

std::vector<Complex> empirical_approximant(std::span<const std::size_t> tuple,
                                           const SparsificationInstance& inst) {
  require_tuple(tuple, inst.terms());
  auto out = scaled_approximant(tuple, inst);
  const double L = static_cast<double>(tuple.size());
  for (Complex& z : out) z /= L;
  return out;
}

double approximation_error(std::span<const std::size_t> tuple, const SparsificationInstance& inst) {
  require_tuple(tuple, inst.terms());
  const auto sum = scaled_approximant(tuple, inst);
  return error_integral(inst, sum, static_cast<double>(tuple.size()));
}

SparsificationResult sparsify(const SparsificationInstance& inst, double eps, std::uint64_t seed,
                              std::uint64_t max_attempts, unsigned threads) {
  return find_witness(inst, eps, choose_L(inst.p(), eps), seed, max_attempts, threads);
}

SparsificationResult find_witness(const SparsificationInstance& inst, double eps, std::uint64_t L,
                                  std::uint64_t seed, std::uint64_t max_attempts,
                                  unsigned threads) {
  require_positive_eps(eps);
  if (L < 1) throw Error(ErrorCode::ConfigError, "tuple length L must be >= 1");
  if (max_attempts < 1) throw Error(ErrorCode::ConfigError, "max_attempts must be >= 1");
  const double eps_p = std::pow(eps, inst.p());
  const CounterRng rng(seed);
  const std::uint64_t batch = std::max(1u, threads);

  for (std::uint64_t first = 0; first < max_attempts; first += batch) {
    const std::uint64_t count = std::min(batch, max_attempts - first);
    std::vector<double> errors(count);
    std::vector<std::vector<std::size_t>> tuples(count, std::vector<std::size_t>(L));
    parallel_blocks(count, threads, [&](std::size_t i) {
      draw_tuple(inst.measure(), rng, first + i, 0, tuples[i]);
      errors[i] = approximation_error(tuples[i], inst);
    });
    for (std::uint64_t i = 0; i < count; ++i) {
      if (errors[i] <= eps_p) {
        SparsificationResult result;
        result.tuple = std::move(tuples[i]);
        result.L = L;
        result.p = inst.p();
        result.eps = eps;
        result.eps_p = eps_p;
        result.error_p = errors[i];
        result.attempts = first + i + 1;
        result.seed = seed;
        return result;
      }
    }
  }
  std::ostringstream msg;
  msg << "no tuple of length " << L << " reached error eps^p = " << eps_p << " in "
      << max_attempts << " attempts (seed " << seed << ")";
  throw Error(ErrorCode::MaxAttemptsExceeded, msg.str());
}

TupleStatistics tuple_statistics_exhaustive(const SparsificationInstance& inst, double eps,
                                            std::uint64_t L, unsigned threads, std::uint64_t cap) {
  require_positive_eps(eps);
  if (L < 1) throw Error(ErrorCode::ConfigError, "tuple length L must be >= 1");
  if (product_size_within(inst.terms(), L, cap) == 0) {
    std::ostringstream msg;
    msg << inst.terms() << "^" << L << " index tuples exceed the enumeration cap " << cap;
    throw Error(ErrorCode::CapExceeded, msg.str());
  }
  // Zero-probability indices contribute nothing, so only the support is walked.
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < inst.terms(); ++k) {
    if (inst.measure().probs[k] > 0.0) support.push_back(k);
  }
  const std::size_t s = support.size();
  const std::uint64_t total = product_size_within(s, L, cap);
  const std::size_t m = inst.points();
  const double eps_p = std::pow(eps, inst.p());
  const double length = static_cast<double>(L);

  const std::uint64_t blocks = (total + kTupleBlock - 1) / kTupleBlock;
  std::vector<TupleStatistics> partial(blocks);
  parallel_blocks(blocks, threads, [&](std::size_t block) {
    const std::uint64_t begin = block * kTupleBlock;
    const std::uint64_t end = std::min(total, begin + kTupleBlock);
    std::vector<std::size_t> digit(L);
    std::uint64_t rest = begin;
    for (std::size_t l = L; l-- > 0;) {
      digit[l] = rest % s;
      rest /= s;
    }
    // prefix[l] holds sum of the first l signed rows, laid out (l, j).
    std::vector<Complex> prefix((L + 1) * m);
    std::vector<double> weight(L + 1);
    weight[0] = 1.0;
    auto rebuild_from = [&](std::size_t from) {
      for (std::size_t l = from; l < L; ++l) {
        const std::size_t k = support[digit[l]];
        const auto row = inst.signed_row(k);
        for (std::size_t j = 0; j < m; ++j) prefix[(l + 1) * m + j] = prefix[l * m + j] + row[j];
        weight[l + 1] = weight[l] * inst.measure().probs[k];
      }
    };
    rebuild_from(0);

    CompensatedSum expected;
    CompensatedSum bad;
    const std::span<const Complex> full(prefix.data() + L * m, m);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const double err = error_integral(inst, full, length);
      expected.add(weight[L] * err);
      if (err > eps_p) bad.add(weight[L]);
      if (idx + 1 == end) break;
      std::size_t pos = L - 1;
      while (++digit[pos] == s) {
        digit[pos] = 0;
        --pos;
      }
      rebuild_from(pos);
    }
    partial[block] = {expected.value(), bad.value()};
  });

  CompensatedSum expected;
  CompensatedSum bad;
  for (const auto& part : partial) {
    expected.add(part.expected_error);
    bad.add(part.bad_measure);
  }
  return {expected.value(), bad.value()};
}

double expected_error_exhaustive(const SparsificationInstance& inst, std::uint64_t L,
                                 unsigned threads, std::uint64_t cap) {
  return tuple_statistics_exhaustive(inst, 1.0, L, threads, cap).expected_error;
}

double bad_set_measure_exhaustive(const SparsificationInstance& inst, double eps, std::uint64_t L,
                                  unsigned threads, std::uint64_t cap) {
  return tuple_statistics_exhaustive(inst, eps, L, threads, cap).bad_measure;
}

BadSetBounds bad_set_bounds(double p, double eps, std::uint64_t L) {
  const double base = 16.0 * p / (eps * eps * static_cast<double>(L));
  return {std::min(1.0, std::sqrt(base)), std::min(1.0, std::pow(base, p / 2.0))};
}

double expected_error_bound(double p, std::uint64_t L) {
  return std::pow(16.0 * p / static_cast<double>(L), p / 2.0);
}

TupleMonteCarlo tuple_monte_carlo(const SparsificationInstance& inst, double eps, std::uint64_t L,
                                  std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  require_positive_eps(eps);
  if (L < 1) throw Error(ErrorCode::ConfigError, "tuple length L must be >= 1");
  if (samples < 1) throw Error(ErrorCode::TooFewSamples, "need at least one sample");
  const CounterRng rng(seed);
  const double eps_p = std::pow(eps, inst.p());
  constexpr std::uint64_t kBlock = 256;
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<RunningMoments> errors(blocks);
  std::vector<std::uint64_t> bad(blocks, 0);
  parallel_blocks(blocks, threads, [&](std::size_t block) {
    std::vector<std::size_t> tuple(L);
    const std::uint64_t end = std::min(samples, (block + 1) * kBlock);
    for (std::uint64_t s = block * kBlock; s < end; ++s) {
      draw_tuple(inst.measure(), rng, s, 1, tuple);
      const double err = approximation_error(tuple, inst);
      errors[block].add(err);
      if (err > eps_p) ++bad[block];
    }
  });
  RunningMoments all;
  std::uint64_t bad_total = 0;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    all.merge(errors[b]);
    bad_total += bad[b];
  }
  return {samples, all.mean(), all.standard_error(),
          static_cast<double>(bad_total) / static_cast<double>(samples)};
}

}  // namespace clsparse
