#include "crowdte/te.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "crowdte/kernels.hpp"

namespace crowdte {

namespace {
constexpr std::int64_t kMaxTasks = std::numeric_limits<std::int32_t>::max();
}

TeState::TeState(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("worker count must be positive");
  m_.assign(static_cast<std::size_t>(n) * n, 0);
  n_counts_.assign(static_cast<std::size_t>(n) * n, 0);
}

void TeState::update(std::span<const Answer> x) {
  if (static_cast<int>(x.size()) != n_) {
    throw std::invalid_argument("answer vector length does not match state dimension");
  }
  if (t_ >= kMaxTasks) throw std::overflow_error("co-answer counters saturated");

  const auto& kernel = kernels::active_kernel_set();
  for (int i = 0; i < n_; ++i) {
    const Answer xi = x[static_cast<std::size_t>(i)];
    if (xi == 0) continue;
    kernel.accumulate_row(m_.data() + idx(i, 0), n_counts_.data() + idx(i, 0),
                          x.data(), n_, xi);
    // The row pass also added x_i^2 = 1 at the diagonal; the diagonal is
    // undefined and stays at zero.
    m_[idx(i, i)] -= 1;
    n_counts_[idx(i, i)] -= 1;
  }
  ++t_;
}

void TeState::merge_from(const TeState& other) {
  if (other.n_ != n_) throw std::invalid_argument("cannot merge states of different dimension");
  if (t_ + other.t_ > kMaxTasks) throw std::overflow_error("co-answer counters saturated");
  for (std::size_t k = 0; k < m_.size(); ++k) {
    m_[k] += other.m_[k];
    n_counts_[k] += other.n_counts_[k];
  }
  t_ += other.t_;
}

CovarianceMatrix TeState::empirical_covariance() const {
  CovarianceMatrix c(n_);
  kernels::active_kernel_set().covariance_block(c.data(), m_.data(), n_counts_.data(),
                                                n_ * n_);
  return c;
}

TeEstimate TeState::estimate() const { return estimate_from_covariance(empirical_covariance()); }

void TeState::save(std::ostream& out) const {
  out << "crowdte_te_state 1\n" << n_ << ' ' << t_ << '\n';
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) out << m_at(i, j) << ' ';
  }
  out << '\n';
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) out << n_at(i, j) << ' ';
  }
  out << '\n';
}

TeState TeState::load(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "crowdte_te_state" || version != 1) {
    throw std::runtime_error("not a te-state snapshot");
  }
  int n = 0;
  std::int64_t t = 0;
  if (!(in >> n >> t) || n < 1 || t < 0 || t > kMaxTasks) {
    throw std::runtime_error("corrupt te-state header");
  }
  TeState state(n);
  state.t_ = t;
  auto read_matrix = [&](std::vector<std::int32_t>& dest) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        std::int64_t v = 0;
        if (!(in >> v) || v < -kMaxTasks || v > kMaxTasks) {
          throw std::runtime_error("corrupt te-state matrix");
        }
        dest[state.idx(i, j)] = static_cast<std::int32_t>(v);
        dest[state.idx(j, i)] = static_cast<std::int32_t>(v);
      }
    }
  };
  read_matrix(state.m_);
  read_matrix(state.n_counts_);
  return state;
}

std::pair<int, int> most_informative_pair(const CovarianceMatrix& c, int k) {
  const int n = c.n();
  if (n < 3) throw std::invalid_argument("pair selection needs at least 3 workers");
  int best_i = -1, best_j = -1;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    if (i == k) continue;
    for (int j = i + 1; j < n; ++j) {
      if (j == k) continue;
      const double v = std::fabs(c.at(i, j));
      if (v > best) {
        best = v;
        best_i = i;
        best_j = j;
      }
    }
  }
  return {best_i, best_j};
}

namespace {

struct PairEntry {
  double abs_c;
  int i;
  int j;
};

// Descending |c|; ties by lexicographically smallest (i, j).
std::vector<PairEntry> sorted_pairs(const CovarianceMatrix& c) {
  const int n = c.n();
  std::vector<PairEntry> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      pairs.push_back({std::fabs(c.at(i, j)), i, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const PairEntry& a, const PairEntry& b) {
    if (a.abs_c != b.abs_c) return a.abs_c > b.abs_c;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  return pairs;
}

}  // namespace

std::pair<std::vector<double>, std::vector<std::pair<int, int>>> estimate_abs(
    const CovarianceMatrix& c) {
  const int n = c.n();
  if (n < 3) throw std::invalid_argument("estimation needs at least 3 workers");
  const auto pairs = sorted_pairs(c);

  std::vector<double> abs_theta(static_cast<std::size_t>(n), 0.0);
  std::vector<std::pair<int, int>> chosen(static_cast<std::size_t>(n), {-1, -1});
  for (int k = 0; k < n; ++k) {
    for (const PairEntry& p : pairs) {
      if (p.i == k || p.j == k) continue;
      chosen[static_cast<std::size_t>(k)] = {p.i, p.j};
      const double denom = c.at(p.i, p.j);
      if (denom != 0.0) {
        const double raw = std::sqrt(std::fabs(c.at(p.i, k) * c.at(p.j, k) / denom));
        abs_theta[static_cast<std::size_t>(k)] = std::min(raw, 1.0);
      }
      break;
    }
  }
  return {std::move(abs_theta), std::move(chosen)};
}

std::pair<std::vector<int>, int> estimate_sign(const CovarianceMatrix& c,
                                               const std::vector<double>& abs_theta) {
  const int n = c.n();
  std::vector<double> anchor_score(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double row_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i != k) row_sum += c.at(i, k);
    }
    const double a = abs_theta[static_cast<std::size_t>(k)];
    anchor_score[static_cast<std::size_t>(k)] = a * a + row_sum;
  }

  int k_star = 0;
  for (int k = 1; k < n; ++k) {
    if (std::fabs(anchor_score[static_cast<std::size_t>(k)]) >
        std::fabs(anchor_score[static_cast<std::size_t>(k_star)])) {
      k_star = k;
    }
  }

  std::vector<int> signs(static_cast<std::size_t>(n), +1);
  const int anchor_sign = sign_pm1(anchor_score[static_cast<std::size_t>(k_star)]);
  for (int k = 0; k < n; ++k) {
    signs[static_cast<std::size_t>(k)] =
        k == k_star ? anchor_sign : anchor_sign * sign_pm1(c.at(k, k_star));
  }
  return {std::move(signs), k_star};
}

TeEstimate estimate_from_covariance(const CovarianceMatrix& c) {
  TeEstimate est;
  auto [abs_theta, pairs] = estimate_abs(c);
  auto [signs, k_star] = estimate_sign(c, abs_theta);

  std::vector<double> theta(abs_theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) theta[k] = signs[k] * abs_theta[k];

  est.theta_hat = ReliabilityVector(std::move(theta));
  est.abs_theta = std::move(abs_theta);
  est.signs = std::move(signs);
  est.k_star = k_star;
  est.pairs = std::move(pairs);
  return est;
}

TeEstimate estimate_from_population(const ReliabilityVector& theta) {
  return estimate_from_covariance(population_covariance(theta));
}

}  // namespace crowdte
