#include "clsparse/khintchine.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "clsparse/compensated_sum.hpp"
#include "clsparse/error.hpp"
#include "clsparse/parallel.hpp"

namespace clsparse {

namespace {

constexpr int kSegmentBits = 12;

void require_p_at_least_one(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "Rademacher moments need a finite p >= 1, got " << p;
    throw Error(ErrorCode::PLessThanOne, msg.str());
  }
}

void require_compositions_within_cap(int k, int n) {
  if (k < 1) throw Error(ErrorCode::ConfigError, "moment index k must be >= 1");
  if (n < 1) throw Error(ErrorCode::ShapeMismatch, "need at least one coefficient");
  if (composition_count(k, n) > kMaxCompositions) {
    std::ostringstream msg;
    msg << "compositions of " << k << " into " << n << " parts exceed the cap of "
        << kMaxCompositions;
    throw Error(ErrorCode::CapExceeded, msg.str());
  }
}

std::vector<BigInt> factorials(int n) {
  std::vector<BigInt> out(static_cast<std::size_t>(n) + 1);
  out[0] = 1;
  for (int i = 1; i <= n; ++i) out[i] = out[i - 1] * i;
  return out;
}

double moment_term(double s, double p) {
  const double a = std::abs(s);
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

}  // namespace

double khintchine_sum_exhaustive(std::span<const double> c, double p, unsigned threads,
                                 int max_length) {
  require_p_at_least_one(p);
  const int n = static_cast<int>(c.size());
  if (n < 1) throw Error(ErrorCode::ShapeMismatch, "need at least one coefficient");
  if (n > max_length || n > 62) {
    std::ostringstream msg;
    msg << "2^" << n << " sign vectors exceed the enumeration cap 2^" << max_length;
    throw Error(ErrorCode::CapExceeded, msg.str());
  }
  for (double x : c) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "coefficient is not finite");
  }

  const int segment_bits = std::min(n, kSegmentBits);
  const std::uint64_t segment_len = std::uint64_t{1} << segment_bits;
  const std::uint64_t segments = std::uint64_t{1} << (n - segment_bits);
  std::vector<double> partial(segments);

  parallel_blocks(segments, threads, [&](std::size_t seg) {
    const std::uint64_t begin = seg * segment_len;
    std::uint64_t gray = begin ^ (begin >> 1);
    // Bit i of `gray` set means eps_i = -1.
    CompensatedSum start;
    for (int i = 0; i < n; ++i) start.add(((gray >> i) & 1u) ? -c[i] : c[i]);
    double running = start.value();
    CompensatedSum acc;
    acc.add(moment_term(running, p));
    for (std::uint64_t idx = begin + 1; idx < begin + segment_len; ++idx) {
      const int flip = std::countr_zero(idx);
      gray ^= std::uint64_t{1} << flip;
      running += ((gray >> flip) & 1u) ? -2.0 * c[flip] : 2.0 * c[flip];
      acc.add(moment_term(running, p));
    }
    partial[seg] = acc.value();
  });

  CompensatedSum total;
  for (double v : partial) total.add(v);
  return std::ldexp(total.value(), -n);
}

BigInt composition_count(int k, int n) {
  if (k < 0 || n < 1) return 0;
  // binom(k + n - 1, n - 1), multiplicative form stays integral at each step.
  BigInt result = 1;
  const int top = k + n - 1;
  const int r = std::min(n - 1, k);
  for (int i = 1; i <= r; ++i) {
    result *= top - r + i;
    result /= i;
  }
  return result;
}

BigInt multinomial(std::span<const int> parts) {
  BigInt result = 1;
  int total = 0;
  for (int part : parts) {
    if (part < 0) throw Error(ErrorCode::ConfigError, "multinomial parts must be nonnegative");
    // Build up as a product of binomials binom(total + part, part).
    for (int i = 1; i <= part; ++i) {
      result *= total + i;
      result /= i;
    }
    total += part;
  }
  return result;
}

void for_each_composition(int k, int n, const std::function<void(std::span<const int>)>& visit) {
  if (n < 1 || k < 0) return;
  std::vector<int> t(static_cast<std::size_t>(n), 0);
  t[0] = k;
  while (true) {
    visit(t);
    // Next composition: move one unit from the last nonzero non-final part
    // to its right neighbour, collecting the tail into that neighbour.
    int pos = n - 2;
    while (pos >= 0 && t[pos] == 0) --pos;
    if (pos < 0) return;
    const int tail = t[n - 1];
    t[n - 1] = 0;
    t[pos] -= 1;
    t[pos + 1] = tail + 1;
  }
}

Rational khintchine_sum_even_exact(std::span<const Rational> c, int k) {
  const int n = static_cast<int>(c.size());
  require_compositions_within_cap(k, n);

  const auto fact = factorials(2 * k);
  // powers[n][t] = (c_n^2)^t
  std::vector<std::vector<Rational>> powers(c.size(), std::vector<Rational>(k + 1));
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Rational sq = c[i] * c[i];
    powers[i][0] = 1;
    for (int t = 1; t <= k; ++t) powers[i][t] = powers[i][t - 1] * sq;
  }

  Rational total = 0;
  for_each_composition(k, n, [&](std::span<const int> t) {
    BigInt denom = 1;
    Rational product = 1;
    for (std::size_t i = 0; i < t.size(); ++i) {
      denom *= fact[2 * t[i]];
      if (t[i] > 0) product *= powers[i][t[i]];
    }
    total += Rational(fact[2 * k] / denom) * product;
  });
  return total;
}

Rational multinomial_ratio_max(int k, int n) {
  require_compositions_within_cap(k, n);
  const auto fact = factorials(2 * k);
  Rational best = 0;
  for_each_composition(k, n, [&](std::span<const int> t) {
    BigInt even = fact[2 * k];
    BigInt plain = fact[k];
    for (int part : t) {
      even /= fact[2 * part];
      plain /= fact[part];
    }
    const Rational ratio(even, plain);
    if (ratio > best) best = ratio;
  });
  return best;
}

double haagerup_constant(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "Khintchine constant needs a finite p > 0, got " << p;
    throw Error(ErrorCode::NonpositiveP, msg.str());
  }
  if (p <= 2.0) return 1.0;
  const double log_ratio = std::lgamma((p + 1.0) / 2.0) - 0.5 * std::log(std::numbers::pi);
  return std::numbers::sqrt2 * std::exp(log_ratio / p);
}

MomentReport khintchine_bound_check(const RademacherInstance& inst, unsigned threads,
                                    int max_length) {
  MomentReport report;
  report.p = inst.p;
  report.lhs = khintchine_sum_exhaustive(inst.c, inst.p, threads, max_length);

  CompensatedSum sq;
  for (double x : inst.c) sq.add(x * x);
  report.l2_norm_sq = sq.value();

  const double half = inst.p / 2.0;
  const double scale = std::pow(report.l2_norm_sq, half);
  report.bound_theorem = std::pow(inst.p, half) * scale;
  report.bound_haagerup = std::pow(haagerup_constant(inst.p), inst.p) * scale;
  report.ratio_theorem = report.bound_theorem > 0.0 ? report.lhs / report.bound_theorem : 0.0;
  report.ratio_haagerup = report.bound_haagerup > 0.0 ? report.lhs / report.bound_haagerup : 0.0;
  report.pass_theorem = report.lhs <= report.bound_theorem * (1.0 + kBoundSlack);
  report.pass_haagerup = report.lhs <= report.bound_haagerup * (1.0 + kBoundSlack);

  const double k = inst.p / 2.0;
  if (k == std::floor(k) && k >= 1.0 && k <= 64.0) {
    const int ki = static_cast<int>(k);
    const int n = static_cast<int>(inst.c.size());
    if (composition_count(ki, n) <= kMaxCompositions) {
      report.ratio_constant = static_cast<double>(multinomial_ratio_max(ki, n));
    }
  }
  return report;
}

}  // namespace clsparse
