#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace crowdte {

// Worker output for one task: -1, +1, or 0 when no answer was given.
using Answer = std::int8_t;

// Per-worker reliability vector. Entry i is the bias of worker i toward the
// truth: when the worker answers, the answer is correct with probability
// (1 + theta_i) / 2. Zero means non-informative, negative means adversarial.
class ReliabilityVector {
 public:
  ReliabilityVector() = default;
  // Validates every entry lies in [-1, 1]. Any length is accepted here;
  // operations that need at least three workers check for themselves.
  explicit ReliabilityVector(std::vector<double> values);

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

struct ModelParams {
  ReliabilityVector theta;
  double alpha = 1.0;  // probability that a worker answers a given task

  ModelParams(ReliabilityVector theta_in, double alpha_in);
};

struct TaskSample {
  std::vector<Answer> answers;
  std::int8_t ground_truth = +1;
};

// Pairwise covariance table. The diagonal is undefined in this model: it is
// stored as zero and never read; consumers index i != j only.
class CovarianceMatrix {
 public:
  CovarianceMatrix() = default;
  explicit CovarianceMatrix(int n) : n_(n), entries_(static_cast<std::size_t>(n) * n, 0.0) {}

  int n() const { return n_; }
  double at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
  void set_symmetric(int i, int j, double value) {
    entries_[static_cast<std::size_t>(i) * n_ + j] = value;
    entries_[static_cast<std::size_t>(j) * n_ + i] = value;
  }
  double* data() { return entries_.data(); }
  const double* data() const { return entries_.data(); }

 private:
  int n_ = 0;
  std::vector<double> entries_;
};

// min over removed worker k of the strongest remaining pair sqrt(|theta_i theta_j|),
// i, j, k pairwise distinct. Requires n >= 3.
double a_functional(const ReliabilityVector& theta);

// Sum of entries; 0 for the empty vector.
double b_functional(const ReliabilityVector& theta);

// True iff at least 3 entries are nonzero and the sum is positive. This is
// exactly the set where a_functional > 0 and b_functional > 0.
bool in_identifiable_set(const ReliabilityVector& theta);

// C[i][j] = theta_i * theta_j off the diagonal; diagonal left at zero.
CovarianceMatrix population_covariance(const ReliabilityVector& theta);

// log(P(x | truth=+1) / P(x | truth=-1)) = sum_i w_i x_i with
// w_i = log((1+theta_i)/(1-theta_i)). A worker with |theta_i| = 1 who
// answered contributes +-inf; a +inf and a -inf together yield NaN, which
// callers treat as an indeterminate ratio.
double loglikelihood_ratio(std::span<const Answer> x, const ReliabilityVector& theta);

// Sign with the fixed convention sign(0) = +1.
inline int sign_pm1(double v) { return v < 0.0 ? -1 : +1; }

}  // namespace crowdte
