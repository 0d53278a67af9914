#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crowdte/model.hpp"
#include "crowdte/rng.hpp"

namespace crowdte {

enum class InstanceKind {
  HalfInformative,   // theta_i = a for the first floor(n/2) workers, else 0
  ThreeInformative,  // theta = (1, a, a, 0, ..., 0)
  SignHard,          // theta = (a, -a, a, -a, b/(n-4), ..., b/(n-4))
  Explicit,
};

struct InstanceSpec {
  InstanceKind kind = InstanceKind::Explicit;
  int n = 0;
  std::int64_t t = 0;
  double alpha = 1.0;
  double a = 0.0;
  double b = 0.0;
  std::optional<ReliabilityVector> explicit_theta;

  // Benchmark presets (n = 50, alpha = 0.25; t = 1e3 / 1e4 / 1e4).
  static InstanceSpec half_informative(double a, int n = 50, std::int64_t t = 1000,
                                       double alpha = 0.25);
  static InstanceSpec three_informative(double a, int n = 50, std::int64_t t = 10000,
                                        double alpha = 0.25);
  static InstanceSpec sign_hard(double b, double a = 0.9, int n = 50, std::int64_t t = 10000,
                                double alpha = 0.25);
  static InstanceSpec explicit_instance(ReliabilityVector theta, std::int64_t t, double alpha);

  void validate() const;
  std::string label() const;
};

ReliabilityVector build_theta(const InstanceSpec& spec);

// Draw one task: uniform +-1 truth, then each worker independently answers
// truth with probability alpha*(1+theta)/2, -truth with alpha*(1-theta)/2,
// nothing with 1-alpha.
TaskSample sample_task(const ModelParams& params, Rng& rng);

// Uniform shuffle. Returns (permuted, p) with permuted[i] = theta[p[i]].
std::pair<ReliabilityVector, std::vector<int>> permute_theta(const ReliabilityVector& theta,
                                                             Rng& rng);

struct RunData {
  ReliabilityVector theta;       // permuted vector actually used for sampling
  std::vector<int> permutation;  // theta[i] == build_theta(spec)[permutation[i]]
  std::vector<TaskSample> samples;
};

// Build theta, shuffle it, draw t i.i.d. tasks. Fully determined by seed.
RunData generate_run(const InstanceSpec& spec, std::uint64_t seed);

}  // namespace crowdte
