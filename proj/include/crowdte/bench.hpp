#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "crowdte/simulator.hpp"

namespace crowdte {

struct BenchConfig {
  InstanceSpec instance;
  int runs = 200;
  std::uint64_t seed = 1;
  bool run_te = true;
  bool run_majority = true;
  bool run_oracle = true;
  int threads = 0;  // 0 = hardware concurrency
};

struct MetricStats {
  double mean = 0.0;
  double std_error = 0.0;  // standard error of the mean
};

// Published values for the preset instances, shown next to measured numbers.
// The published estimation column is on the accuracy-probability scale
// p = (1 + theta)/2, whose sup error is exactly half the theta-scale one,
// and was produced with t = 1e4 for every family; the reference only
// attaches where it is reproducible (see README).
struct ReferenceRow {
  std::optional<double> te_estimation_error_accuracy;  // accuracy scale
  std::optional<double> oracle_prediction_error;
  std::optional<double> majority_prediction_error;
  std::optional<double> te_prediction_error;
};
std::optional<ReferenceRow> reference_row(const InstanceSpec& spec);

struct BenchResult {
  std::string instance_label;
  int runs = 0;
  std::uint64_t seed = 0;
  std::optional<MetricStats> te_estimation_error;           // E ||theta_hat - theta||_inf
  std::optional<MetricStats> te_estimation_error_accuracy;  // same error on the p scale (half)
  std::optional<MetricStats> te_prediction_error;           // plug-in weighted majority
  std::optional<MetricStats> majority_prediction_error;
  std::optional<MetricStats> oracle_prediction_error;       // weighted majority with true theta
  std::optional<ReferenceRow> reference;
  double wall_seconds = 0.0;
};

// Per run: generate the shuffled instance, stream it through the estimator,
// score the estimate against the run's own theta, and score the enabled
// predictors over the same tasks. Runs execute on a small thread pool;
// aggregation is in run order, so results depend only on (config, seed).
BenchResult run_bench(const BenchConfig& config);

std::string render_bench_csv(const BenchResult& result);
std::string render_bench_markdown(const BenchResult& result);

}  // namespace crowdte
