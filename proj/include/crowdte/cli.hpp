#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "crowdte/bench.hpp"
#include "crowdte/dataset.hpp"

namespace crowdte::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;

struct EstimateOptions {
  std::filesystem::path labels;
  std::filesystem::path output;
  BinarizationConfig binarization = BinarizationConfig::plus_minus_one();
  std::int64_t min_worker_labels = 10;
};

// Reliability estimates for a label file: worker id, signed estimate,
// magnitude, the worker's chosen pair, and the anchor flag.
int cmd_estimate(const EstimateOptions& options, std::ostream& log);

struct PredictOptions {
  std::filesystem::path labels;
  std::optional<std::filesystem::path> gold;
  std::filesystem::path output;
  BinarizationConfig binarization = BinarizationConfig::plus_minus_one();
  std::int64_t min_worker_labels = 10;
  std::uint64_t seed = 1;
};

struct PredictSummary {
  std::int64_t tasks = 0;
  std::int64_t scored_tasks = 0;  // tasks with gold
  std::optional<double> te_error;
  std::optional<double> majority_error;
};

// Plug-in (estimate, then weighted majority) and plain majority predictions
// per task; error rates against gold where present.
int cmd_predict(const PredictOptions& options, std::ostream& log,
                PredictSummary* summary = nullptr);

struct BoundsOptions {
  std::string sweep = "all";  // lemma1 | thresholds | concentration | chernoff | all
  std::filesystem::path output;
  // Multiplies the divergence caps. Not 1.0 only in tests that corrupt the
  // bound on purpose to prove violations are detected.
  double kl_bound_scale = 1.0;
  std::int64_t trials = 10000;
  std::uint64_t seed = 5;
};

// Emits one CSV row per checked inequality; exits with kExitViolation when
// any non-vacuous bound fails.
int cmd_bounds(const BoundsOptions& options, std::ostream& log);

struct SimulateOptions {
  InstanceSpec instance;
  std::uint64_t seed = 1;
  std::filesystem::path labels_output;
  std::filesystem::path gold_output;
  std::optional<std::filesystem::path> theta_output;
};

int cmd_simulate(const SimulateOptions& options, std::ostream& log);

struct BenchOptions {
  BenchConfig config;
  std::filesystem::path output;  // empty: table goes to log only
  std::string format = "csv";    // csv | markdown
};

int cmd_bench(const BenchOptions& options, std::ostream& log);

}  // namespace crowdte::cli
