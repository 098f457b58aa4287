#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace clsparse {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Sign vectors are enumerated exhaustively, so N is capped at 24 (2^24 terms).
inline constexpr int kMaxRademacherLength = 24;
/// Upper limit on compositions of k into N parts visited by the exact paths.
inline constexpr std::uint64_t kMaxCompositions = 1'000'000;
inline constexpr double kBoundSlack = 1e-9;

struct RademacherInstance {
  std::vector<double> c;
  double p = 2.0;
};

/// S(p) = 2^-N sum over all sign vectors of |sum_n c_n eps_n|^p.
///
/// Walks {+-1}^N in Gray-code order so each step changes one sign and the
/// running sum is updated in O(1). The walk is cut into fixed segments whose
/// starting sums are recomputed from scratch; segment partials are reduced
/// in order, so the result is independent of `threads`.
double khintchine_sum_exhaustive(std::span<const double> c, double p, unsigned threads = 1,
                                 int max_length = kMaxRademacherLength);

/// Exact S(2k) from the even-moment multinomial expansion
///   S(2k) = sum_{t_1+...+t_N = k} (2k; 2t_1..2t_N) prod_n (c_n^2)^{t_n}.
Rational khintchine_sum_even_exact(std::span<const Rational> c, int k);

/// max over compositions t of k into N parts of (2k; 2t) / (k; t).
Rational multinomial_ratio_max(int k, int n);

/// Number of compositions of k into n nonnegative parts, binom(k+n-1, n-1).
BigInt composition_count(int k, int n);

/// Multinomial coefficient (sum parts; parts...).
BigInt multinomial(std::span<const int> parts);

/// Calls `visit` with every composition of k into n nonnegative parts, in
/// lexicographically decreasing order of the first part.
void for_each_composition(int k, int n, const std::function<void(std::span<const int>)>& visit);

/// Sharp upper Khintchine constant: 1 for p <= 2, sqrt(2) (Gamma((p+1)/2)/sqrt(pi))^(1/p) above.
double haagerup_constant(double p);

struct MomentReport {
  double p = 0.0;
  double lhs = 0.0;          // S(p)
  double l2_norm_sq = 0.0;   // sum c_n^2
  double bound_theorem = 0.0;   // p^(p/2) (sum c^2)^(p/2)
  double bound_haagerup = 0.0;  // B_p^p (sum c^2)^(p/2)
  double ratio_theorem = 0.0;
  double ratio_haagerup = 0.0;
  bool pass_theorem = false;
  bool pass_haagerup = false;
  /// For even integer p = 2k: the measured combinatorial constant C(k, N).
  std::optional<double> ratio_constant;
};

MomentReport khintchine_bound_check(const RademacherInstance& inst, unsigned threads = 1,
                                    int max_length = kMaxRademacherLength);

}  // namespace clsparse
