#include "crowdte/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace crowdte {

ReliabilityVector::ReliabilityVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= -1.0 && v <= 1.0)) {
      throw std::invalid_argument("reliability entry " + std::to_string(i) +
                                  " outside [-1, 1]: " + std::to_string(v));
    }
  }
}

ModelParams::ModelParams(ReliabilityVector theta_in, double alpha_in)
    : theta(std::move(theta_in)), alpha(alpha_in) {
  // alpha = 0 is the degenerate nobody-answers limit; it is allowed here so
  // the sampler can exercise it, while instance validation keeps benchmarks
  // inside (0, 1].
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
}

double a_functional(const ReliabilityVector& theta) {
  const int n = theta.size();
  if (n < 3) throw std::invalid_argument("a_functional needs at least 3 workers");

  // The best remaining pair after removing k is the product of the two
  // largest magnitudes among indices != k, so the top three magnitudes
  // cover every case.
  int top0 = -1, top1 = -1, top2 = -1;
  for (int i = 0; i < n; ++i) {
    const double m = std::fabs(theta[i]);
    if (top0 < 0 || m > std::fabs(theta[top0])) {
      top2 = top1;
      top1 = top0;
      top0 = i;
    } else if (top1 < 0 || m > std::fabs(theta[top1])) {
      top2 = top1;
      top1 = i;
    } else if (top2 < 0 || m > std::fabs(theta[top2])) {
      top2 = i;
    }
  }

  double min_pair = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    double first, second;
    if (k != top0 && k != top1) {
      first = theta[top0];
      second = theta[top1];
    } else if (k == top0) {
      first = theta[top1];
      second = theta[top2];
    } else {  // k == top1
      first = theta[top0];
      second = theta[top2];
    }
    const double pair = std::fabs(first) * std::fabs(second);
    if (pair < min_pair) min_pair = pair;
  }
  return std::sqrt(min_pair);
}

double b_functional(const ReliabilityVector& theta) {
  double sum = 0.0;
  for (int i = 0; i < theta.size(); ++i) sum += theta[i];
  return sum;
}

bool in_identifiable_set(const ReliabilityVector& theta) {
  int informative = 0;
  for (int i = 0; i < theta.size(); ++i) {
    if (theta[i] != 0.0) ++informative;
  }
  return informative >= 3 && b_functional(theta) > 0.0;
}

CovarianceMatrix population_covariance(const ReliabilityVector& theta) {
  const int n = theta.size();
  CovarianceMatrix c(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      c.set_symmetric(i, j, theta[i] * theta[j]);
    }
  }
  return c;
}

double loglikelihood_ratio(std::span<const Answer> x, const ReliabilityVector& theta) {
  if (static_cast<int>(x.size()) != theta.size()) {
    throw std::invalid_argument("answer vector length does not match worker count");
  }
  double sum = 0.0;
  for (int i = 0; i < theta.size(); ++i) {
    if (x[static_cast<std::size_t>(i)] == 0) continue;
    const double w = std::log((1.0 + theta[i]) / (1.0 - theta[i]));
    sum += w * x[static_cast<std::size_t>(i)];
  }
  return sum;
}

}  // namespace crowdte
