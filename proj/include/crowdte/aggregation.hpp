#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crowdte/model.hpp"
#include "crowdte/rng.hpp"
#include "crowdte/te.hpp"

namespace crowdte {

// Log-odds weights w_i = log((1+theta_i)/(1-theta_i)); +-inf at theta = +-1.
struct WeightVector {
  std::vector<double> weights;
};

WeightVector weights_from_theta(const ReliabilityVector& theta);

struct Prediction {
  std::int8_t value = +1;   // in {-1, +1}
  double score = 0.0;       // vote statistic (1/n) sum w_i x_i; may be +-inf or NaN
  bool tie_broken = false;  // decided by the fair coin (score 0 or indeterminate)
};

// Sign of the weighted vote; zero or indeterminate scores fall back to a
// fair +-1 coin drawn from rng. An infinite weight on an answering worker
// dominates; opposing infinite weights are indeterminate.
Prediction weighted_majority(std::span<const Answer> x, const WeightVector& w, Rng& rng);

// Plain majority: weighted_majority with unit weights, including identical
// tie behaviour under a shared rng.
Prediction majority(std::span<const Answer> x, Rng& rng);

struct DatasetPrediction {
  std::vector<Prediction> predictions;
  double error_rate = 0.0;  // fraction of tasks where value != ground truth
};

// Weighted majority per task with weights from theta. Tie-break draws come
// from a stream derived from (seed, task index), so tasks may be scored in
// parallel without changing results.
DatasetPrediction predict_dataset(const std::vector<TaskSample>& samples,
                                  const ReliabilityVector& theta, std::uint64_t seed);

// Online plug-in: each task is predicted from the reliability estimate built
// on the tasks seen before it, then folded into the running state. The
// benchmark tables use the two-pass offline protocol instead.
class OnlinePlugInPredictor {
 public:
  OnlinePlugInPredictor(int n, std::uint64_t seed);

  Prediction predict_and_ingest(std::span<const Answer> x);
  const TeState& state() const { return state_; }

 private:
  TeState state_;
  std::uint64_t seed_;
  std::uint64_t task_index_ = 0;
};

}  // namespace crowdte
