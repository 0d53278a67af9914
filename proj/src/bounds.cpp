#include "crowdte/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "crowdte/distribution.hpp"
#include "crowdte/rng.hpp"
#include "crowdte/simulator.hpp"
#include "crowdte/te.hpp"

namespace crowdte::bounds {

namespace {

double binomial_se(double p_hat, std::int64_t trials) {
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

std::pair<ReliabilityVector, ReliabilityVector> hard_instance_pair(HardInstanceKind kind, int n,
                                                                   double a, double b,
                                                                   double epsilon) {
  require(a > 0.0 && a < 1.0, "a must lie in (0, 1)");
  std::vector<double> theta(static_cast<std::size_t>(n), 0.0);
  std::vector<double> theta_prime(static_cast<std::size_t>(n), 0.0);

  switch (kind) {
    case HardInstanceKind::AbsHard: {
      require(n >= 3, "abs-hard pair needs n >= 3");
      const double eps_max = std::min(a, std::min((1.0 - a) / 2.0, 0.25));
      require(epsilon >= 0.0 && epsilon < eps_max, "epsilon outside [0, min(a, (1-a)/2, 1/4))");
      theta[0] = 1.0;
      theta[1] = theta[2] = a;
      theta_prime[0] = 1.0 - 2.0 * epsilon;
      theta_prime[1] = theta_prime[2] = a / (1.0 - 2.0 * epsilon);
      break;
    }
    case HardInstanceKind::SignHard: {
      require(n > 4, "sign-hard pair needs n > 4");
      require(b > 0.0 && b / (n - 4) <= 1.0, "b must lie in (0, n-4]");
      const double c = b / (n - 4);
      theta[0] = theta[1] = a;
      theta[2] = theta[3] = -a;
      theta_prime[0] = theta_prime[1] = -a;
      theta_prime[2] = theta_prime[3] = a;
      for (int i = 4; i < n; ++i) {
        theta[static_cast<std::size_t>(i)] = c;
        theta_prime[static_cast<std::size_t>(i)] = c;
      }
      break;
    }
  }

  ReliabilityVector first(std::move(theta));
  ReliabilityVector second(std::move(theta_prime));
  // Both members must sit inside the hardness class they witness.
  constexpr double kSlack = 1e-12;
  for (const ReliabilityVector* v : {&first, &second}) {
    if (a_functional(*v) < a - kSlack || (b > 0.0 && b_functional(*v) < b - kSlack)) {
      throw std::logic_error("hard instance fell outside its parameter class");
    }
  }
  return {std::move(first), std::move(second)};
}

BoundReport verify_lemma1(HardInstanceKind kind, int n, double a, double b, double epsilon,
                          double alpha, double bound_scale) {
  auto [theta, theta_prime] = hard_instance_pair(kind, n, a, b, epsilon);
  const JointDistribution p(ModelParams(theta, alpha));
  const JointDistribution p_prime(ModelParams(theta_prime, alpha));

  BoundReport report;
  report.check = "divergence_cap";
  report.params = {n, a, b, alpha, epsilon, 0.0, 0, 0, 0.0, 0.0};
  report.lhs = kl_divergence(p_prime, p);
  switch (kind) {
    case HardInstanceKind::AbsHard:
      report.kind = "abs_hard";
      report.rhs = bound_scale * constants::kAbsHardKlFactor * alpha * alpha * a * a * a * a *
                   epsilon * epsilon / (1.0 - a);
      break;
    case HardInstanceKind::SignHard: {
      report.kind = "sign_hard";
      const double one_minus_a = 1.0 - a;
      report.rhs = bound_scale * constants::kSignHardKlFactor * alpha * alpha * a * a * b * b /
                   ((n - 4) * one_minus_a * one_minus_a * one_minus_a * one_minus_a);
      break;
    }
  }
  report.satisfied = report.lhs <= report.rhs;
  return report;
}

SampleComplexityThresholds sample_complexity_thresholds(double a, double b, double alpha,
                                                        double epsilon, double delta, int n) {
  require(a > 0.0 && a < 1.0, "a must lie in (0, 1)");
  require(b > 0.0, "b must be positive");
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  require(n > 4, "thresholds need n > 4");
  const double eps_lower_max = std::min(a, std::min((1.0 - a) / 2.0, 0.25));
  const double eps_upper_max = std::min(b / 3.0, 1.0);
  require(epsilon > 0.0 && epsilon < eps_lower_max && epsilon < eps_upper_max,
          "epsilon outside the valid range");
  require(delta > 0.0 && delta <= 0.25, "delta must lie in (0, 1/4]");

  const double a2 = a * a;
  const double a4 = a2 * a2;
  const double alpha2 = alpha * alpha;
  const double one_minus_a = 1.0 - a;

  SampleComplexityThresholds th;
  th.lower_abs = (1.0 / constants::kAbsHardKlFactor) * one_minus_a /
                 (alpha2 * a4 * epsilon * epsilon) * std::log(1.0 / (4.0 * delta));
  th.lower_sign = (1.0 / constants::kSignHardKlFactor) * one_minus_a * one_minus_a * one_minus_a *
                  one_minus_a * (n - 4) / (alpha2 * a2 * b * b) * std::log(1.0 / (4.0 * delta));
  th.upper_abs = constants::kUpperAbsSampleFactor / (alpha2 * a4 * epsilon * epsilon) *
                 std::log(6.0 * n * n / delta);
  th.upper_sign = constants::kUpperSignSampleFactor * n / (alpha2 * a2 * b * b) *
                  std::log(4.0 * n * n / delta);
  return th;
}

std::vector<BoundReport> concentration_tail_check(const ReliabilityVector& theta, double alpha,
                                                  std::int64_t t, double epsilon,
                                                  std::int64_t trials, std::uint64_t seed) {
  require(trials >= 1000, "concentration check needs at least 1e3 trials");
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  const int n = theta.size();
  const ModelParams params(theta, alpha);
  const CovarianceMatrix exact = population_covariance(theta);

  std::int64_t sup_hits = 0;
  std::vector<std::int64_t> row_hits(static_cast<std::size_t>(n), 0);
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::derive(seed, {static_cast<std::uint64_t>(trial)});
    TeState state(n);
    for (std::int64_t s = 0; s < t; ++s) state.update(sample_task(params, rng));
    const CovarianceMatrix hat = state.empirical_covariance();

    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
      double row_dev = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dev = hat.at(i, j) - exact.at(i, j);
        sup = std::max(sup, std::fabs(dev));
        row_dev += dev;
      }
      if (std::fabs(row_dev) >= epsilon) ++row_hits[static_cast<std::size_t>(i)];
    }
    if (sup >= epsilon) ++sup_hits;
  }

  const double alpha2t = alpha * alpha * static_cast<double>(t);

  BoundReport sup_report;
  sup_report.check = "cov_sup_tail";
  sup_report.kind = "monte_carlo";
  sup_report.params = {n, 0.0, 0.0, alpha, epsilon, 0.0, t, trials, 0.0, 0.0};
  sup_report.lhs = static_cast<double>(sup_hits) / static_cast<double>(trials);
  sup_report.rhs = constants::kPairTailUnionFactor * n * n *
                   std::exp(-epsilon * epsilon * alpha2t / constants::kPairTailExponentDivisor);
  sup_report.vacuous = sup_report.rhs >= 1.0;
  sup_report.satisfied = sup_report.lhs <= sup_report.rhs + 4.0 * binomial_se(sup_report.lhs, trials);

  double worst_row = 0.0;
  for (const std::int64_t hits : row_hits) {
    worst_row = std::max(worst_row, static_cast<double>(hits) / static_cast<double>(trials));
  }
  const double b_theta = b_functional(theta);
  const double scale = std::max(b_theta * b_theta, static_cast<double>(n));

  BoundReport row_report;
  row_report.check = "row_sum_tail";
  row_report.kind = "monte_carlo";
  row_report.params = sup_report.params;
  row_report.lhs = worst_row;
  row_report.rhs =
      2.0 * std::exp(-epsilon * epsilon * alpha2t / (constants::kRowSumTailDivisor * scale)) +
      2.0 * n * std::exp(-alpha2t / (constants::kCoanswerExponentDivisor * (n - 1)));
  row_report.vacuous = row_report.rhs >= 1.0;
  row_report.satisfied = row_report.lhs <= row_report.rhs + 4.0 * binomial_se(row_report.lhs, trials);

  return {sup_report, row_report};
}

std::vector<BoundReport> verify_chernoff(double mu, double mu_prime, std::int64_t t,
                                         std::int64_t trials, std::uint64_t seed) {
  require(mu > 0.0 && mu < 1.0, "mu must lie in (0, 1)");
  require(mu_prime > 0.0 && mu_prime < 1.0, "mu' must lie in (0, 1)");
  require(t >= 1 && trials >= 1000, "need t >= 1 and trials >= 1e3");

  std::vector<BoundReport> reports;

  if (2.0 * mu <= 1.0) {
    // D(2mu||mu) >= mu/3. The sharp small-mu constant is 2 ln 2 - 1 ~ 0.386,
    // so mu/2 would be false below mu ~ 0.185; mu/3 is the form the tail
    // bounds in this module actually rely on, and it holds everywhere.
    BoundReport doubled;
    doubled.check = "kl_doubling_lower";
    doubled.kind = "analytic";
    doubled.params.mu = mu;
    doubled.lhs = mu / 3.0;
    doubled.rhs = bernoulli_kl(2.0 * mu, mu);
    doubled.satisfied = doubled.lhs <= doubled.rhs;
    reports.push_back(doubled);
  }

  BoundReport halved;
  halved.check = "kl_halving_lower";
  halved.kind = "analytic";
  halved.params.mu = mu;
  halved.lhs = mu / 8.0;
  halved.rhs = bernoulli_kl(mu / 2.0, mu);
  halved.satisfied = halved.lhs <= halved.rhs;
  reports.push_back(halved);

  // Empirical tail of a Bernoulli(mu) sum against exp(-t D(mu'||mu)).
  const bool upper_tail = mu_prime >= mu;
  const double threshold = static_cast<double>(t) * mu_prime;
  std::int64_t hits = 0;
  Rng rng = Rng::derive(seed, {0xC0FFEE});
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    std::int64_t sum = 0;
    for (std::int64_t s = 0; s < t; ++s) {
      if (rng.next_unit() < mu) ++sum;
    }
    const bool hit = upper_tail ? static_cast<double>(sum) >= threshold
                                : static_cast<double>(sum) <= threshold;
    if (hit) ++hits;
  }

  BoundReport tail;
  tail.check = upper_tail ? "binomial_upper_tail" : "binomial_lower_tail";
  tail.kind = "monte_carlo";
  tail.params.mu = mu;
  tail.params.mu_prime = mu_prime;
  tail.params.t = t;
  tail.params.trials = trials;
  tail.lhs = static_cast<double>(hits) / static_cast<double>(trials);
  tail.rhs = std::exp(-static_cast<double>(t) * bernoulli_kl(mu_prime, mu));
  tail.vacuous = tail.rhs >= 1.0;
  tail.satisfied = tail.lhs <= tail.rhs + 4.0 * binomial_se(tail.lhs, trials);
  reports.push_back(tail);

  return reports;
}

}  // namespace crowdte::bounds
