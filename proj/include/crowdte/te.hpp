#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "crowdte/model.hpp"

namespace crowdte {

struct TeEstimate {
  ReliabilityVector theta_hat;
  std::vector<double> abs_theta;           // in [0, 1]
  std::vector<int> signs;                  // +1 / -1
  int k_star = 0;                          // anchor worker for sign propagation
  std::vector<std::pair<int, int>> pairs;  // per worker, chosen (i, j) with i < j
};

// Streaming co-answer counters. For every pair i != j,
//   m[i][j] = sum over ingested tasks of x_i * x_j
//   n[i][j] = number of tasks both i and j answered
// Counters are exact integers so that streamed, batched, merged and
// snapshot-restored states are bit-identical. Single writer during update;
// shard across states and merge for parallel ingestion.
class TeState {
 public:
  explicit TeState(int n);

  int n() const { return n_; }
  std::int64_t task_count() const { return t_; }

  // O(n^2) fold of one task. Throws on dimension mismatch, and on overflow
  // of the 32-bit counters (task count 2^31 - 1).
  void update(std::span<const Answer> x);
  void update(const TaskSample& sample) { update(std::span<const Answer>(sample.answers)); }

  // Entrywise sum; equivalent to ingesting the concatenated streams.
  void merge_from(const TeState& other);

  std::int32_t m_at(int i, int j) const { return m_[idx(i, j)]; }
  std::int32_t n_at(int i, int j) const { return n_counts_[idx(i, j)]; }

  // c[i][j] = m[i][j] / max(n[i][j], 1); zero matrix at t = 0.
  CovarianceMatrix empirical_covariance() const;

  TeEstimate estimate() const;

  // Snapshot of (n, t, upper-triangular m, upper-triangular n); integers
  // only, so load(save(s)) == s bit-exactly.
  void save(std::ostream& out) const;
  static TeState load(std::istream& in);

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  int n_ = 0;
  std::int64_t t_ = 0;
  std::vector<std::int32_t> m_;
  std::vector<std::int32_t> n_counts_;
};

// Pair {i, j}, i < j, both != k, maximizing |c[i][j]|; ties broken by the
// lexicographically smallest (i, j). Requires n >= 3.
std::pair<int, int> most_informative_pair(const CovarianceMatrix& c, int k);

// |theta_k| = sqrt(|c[i_k][k] * c[j_k][k] / c[i_k][j_k]|) for the chosen
// pair, clipped to [0, 1]; zero when the pair entry is exactly zero.
std::pair<std::vector<double>, std::vector<std::pair<int, int>>> estimate_abs(
    const CovarianceMatrix& c);

// Anchor rule: v_k = abs_theta_k^2 + sum_{i != k} c[i][k]; k* maximizes
// |v_k| (ties -> smallest index); sign(k*) = sign(v_{k*}); other workers get
// sign(k*) * sign(c[k][k*]). sign(0) = +1 throughout.
std::pair<std::vector<int>, int> estimate_sign(const CovarianceMatrix& c,
                                               const std::vector<double>& abs_theta);

// Full estimate from any covariance table (empirical or exact).
TeEstimate estimate_from_covariance(const CovarianceMatrix& c);

// Test seam: run the estimator on the exact population covariance of theta.
// Recovers theta exactly on the identifiable set; for a vector whose sum is
// negative it returns -theta (global sign ambiguity, by construction).
TeEstimate estimate_from_population(const ReliabilityVector& theta);

}  // namespace crowdte
