#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "crowdte/model.hpp"

namespace crowdte::bounds {

// All fixed factors used by the bound calculators, in one place.
namespace constants {
// Divergence cap for the absolute-value-hard pair: alpha^2 a^4 eps^2 / (1-a)
// times this factor.
inline constexpr double kAbsHardKlFactor = 512.0;
// Divergence cap for the sign-hard pair: alpha^2 a^2 b^2 / ((n-4)(1-a)^4)
// times this factor.
inline constexpr double kSignHardKlFactor = 1024.0;
// Tail of ||Chat - C||_inf: kPairTailUnionFactor * n^2 *
// exp(-eps^2 alpha^2 t / kPairTailExponentDivisor).
inline constexpr double kPairTailUnionFactor = 3.0;
inline constexpr double kPairTailExponentDivisor = 120.0;
// Tail of a row sum of Chat - C: 2 exp(-eps^2 alpha^2 t /
// (kRowSumTailDivisor * max(B^2, n))) + 2n exp(-t alpha^2 /
// (kCoanswerExponentDivisor * (n-1))).
inline constexpr double kRowSumTailDivisor = 30.0;
inline constexpr double kCoanswerExponentDivisor = 8.0;
// Sample-size thresholds above which the estimator meets a target accuracy.
inline constexpr double kUpperAbsSampleFactor = 120.0 * 24.0 * 24.0;
inline constexpr double kUpperSignSampleFactor = 30.0 * 8.0 * 8.0;
}  // namespace constants

struct BoundParams {
  int n = 0;
  double a = 0.0, b = 0.0, alpha = 0.0, epsilon = 0.0, delta = 0.0;
  std::int64_t t = 0, trials = 0;
  double mu = 0.0, mu_prime = 0.0;
};

// One checked inequality: satisfied means lhs <= rhs (Monte Carlo checks add
// a 4-standard-error allowance on the empirical side). vacuous flags a
// probability bound that exceeds 1 and therefore constrains nothing.
struct BoundReport {
  std::string check;
  std::string kind;
  BoundParams params;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  bool vacuous = false;
};

enum class HardInstanceKind {
  AbsHard,   // (1, a, a, 0, ...) vs (1-2eps, a/(1-2eps), a/(1-2eps), 0, ...)
  SignHard,  // (a, a, -a, -a, c, ..., c) vs first four entries negated, c = b/(n-4)
};

// The two indistinguishable-parameter constructions. Both members are
// checked to satisfy a_functional >= a and b_functional >= b.
std::pair<ReliabilityVector, ReliabilityVector> hard_instance_pair(HardInstanceKind kind, int n,
                                                                   double a, double b,
                                                                   double epsilon);

// Brute-force divergence of the hard pair against its closed-form cap.
// bound_scale multiplies the cap; anything other than 1 is a test hook for
// corrupting the bound on purpose.
BoundReport verify_lemma1(HardInstanceKind kind, int n, double a, double b, double epsilon,
                          double alpha, double bound_scale = 1.0);

struct SampleComplexityThresholds {
  double lower_abs = 0.0;   // below this t, no estimator resolves |theta| to eps w.p. 1-delta
  double lower_sign = 0.0;  // same for the global sign
  double upper_abs = 0.0;   // above max(upper_abs, upper_sign), TE achieves eps w.p. 1-delta
  double upper_sign = 0.0;
};

SampleComplexityThresholds sample_complexity_thresholds(double a, double b, double alpha,
                                                        double epsilon, double delta, int n);

// Monte Carlo tails of the empirical covariance around its exact value:
// one report for P(||Chat - C||_inf >= eps), one for the worst row-sum
// deviation. Empirical tails must not exceed the closed-form caps beyond
// four binomial standard errors.
std::vector<BoundReport> concentration_tail_check(const ReliabilityVector& theta, double alpha,
                                                  std::int64_t t, double epsilon,
                                                  std::int64_t trials, std::uint64_t seed);

// Binomial tail checks: the two analytic divergence inequalities
// D(2mu||mu) >= mu/2 and D(mu/2||mu) >= mu/8, plus a Monte Carlo tail
// against exp(-t D(mu'||mu)).
std::vector<BoundReport> verify_chernoff(double mu, double mu_prime, std::int64_t t,
                                         std::int64_t trials, std::uint64_t seed);

}  // namespace crowdte::bounds
