#include "crowdte/distribution.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crowdte {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

JointDistribution::JointDistribution(const ModelParams& params) : n_(params.theta.size()) {
  if (n_ < 1 || n_ > kMaxWorkers) {
    throw std::invalid_argument("joint enumeration supports 1..10 workers");
  }
  std::size_t states = 1;
  for (int i = 0; i < n_; ++i) states *= 3;
  table_.assign(states, 0.0);

  std::vector<Answer> x(static_cast<std::size_t>(n_));
  for (std::size_t s = 0; s < states; ++s) {
    decode(s, x);
    double p_plus = 1.0, p_minus = 1.0;
    for (int i = 0; i < n_; ++i) {
      const Answer xi = x[static_cast<std::size_t>(i)];
      if (xi == 0) {
        p_plus *= 1.0 - params.alpha;
        p_minus *= 1.0 - params.alpha;
      } else {
        const double agree = params.alpha * (1.0 + params.theta[i]) / 2.0;
        const double disagree = params.alpha * (1.0 - params.theta[i]) / 2.0;
        p_plus *= xi > 0 ? agree : disagree;
        p_minus *= xi > 0 ? disagree : agree;
      }
    }
    table_[s] = 0.5 * (p_plus + p_minus);
  }
}

std::size_t JointDistribution::encode(std::span<const Answer> x) {
  std::size_t state = 0;
  std::size_t base = 1;
  for (const Answer a : x) {
    state += base * static_cast<std::size_t>(a + 1);
    base *= 3;
  }
  return state;
}

void JointDistribution::decode(std::size_t state, std::span<Answer> out) {
  for (auto& a : out) {
    a = static_cast<Answer>(static_cast<int>(state % 3) - 1);
    state /= 3;
  }
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("distribution sizes differ");
  double sum = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (p[s] == 0.0) continue;
    if (q[s] == 0.0) return kInf;
    sum += p[s] * std::log(p[s] / q[s]);
  }
  return sum;
}

double kl_divergence(const JointDistribution& p, const JointDistribution& q) {
  return kl_divergence(std::span<const double>(p.table()), std::span<const double>(q.table()));
}

double chi2_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("distribution sizes differ");
  double sum = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (p[s] == 0.0 && q[s] == 0.0) continue;
    if (p[s] == 0.0 || q[s] == 0.0) return kInf;
    const double diff = p[s] - q[s];
    sum += p[s] * diff * diff / (p[s] * q[s]);
  }
  return sum;
}

double chi2_divergence(const JointDistribution& p, const JointDistribution& q) {
  return chi2_divergence(std::span<const double>(p.table()), std::span<const double>(q.table()));
}

double bernoulli_kl(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("bernoulli parameters must lie in [0, 1]");
  }
  double sum = 0.0;
  if (p > 0.0) {
    if (q == 0.0) return kInf;
    sum += p * std::log(p / q);
  }
  if (p < 1.0) {
    if (q == 1.0) return kInf;
    sum += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  }
  return sum;
}

}  // namespace crowdte
