#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "crowdte/model.hpp"

namespace crowdte {

// Exact joint law of one task's answer vector over {-1, 0, +1}^n, obtained
// by enumerating all 3^n states and averaging the per-worker kernels over
// the two truth values. Capped at n = 10 (3^10 ~ 59k states), which is all
// the divergence checks need.
class JointDistribution {
 public:
  static constexpr int kMaxWorkers = 10;

  explicit JointDistribution(const ModelParams& params);

  int n() const { return n_; }
  std::size_t size() const { return table_.size(); }
  const std::vector<double>& table() const { return table_; }

  double prob(std::size_t state) const { return table_[state]; }
  double prob(std::span<const Answer> x) const { return table_[encode(x)]; }

  // Base-3 packing with digit x_i + 1 at position i.
  static std::size_t encode(std::span<const Answer> x);
  static void decode(std::size_t state, std::span<Answer> out);

 private:
  int n_ = 0;
  std::vector<double> table_;
};

// sum_x p(x) log(p(x)/q(x)); terms with p(x) = 0 contribute nothing, and
// p(x) > 0 = q(x) yields the +inf sentinel.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const JointDistribution& p, const JointDistribution& q);

// sum_x p(x) (p(x)-q(x))^2 / (p(x) q(x)). Upper-bounds the divergence above.
// Any state where p + q > 0 but p q = 0 yields the +inf sentinel.
double chi2_divergence(std::span<const double> p, std::span<const double> q);
double chi2_divergence(const JointDistribution& p, const JointDistribution& q);

// Divergence between Bernoulli(p) and Bernoulli(q).
double bernoulli_kl(double p, double q);

}  // namespace crowdte
