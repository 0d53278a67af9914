#include "crowdte/aggregation.hpp"

#include <cmath>
#include <stdexcept>

namespace crowdte {

WeightVector weights_from_theta(const ReliabilityVector& theta) {
  WeightVector w;
  w.weights.reserve(static_cast<std::size_t>(theta.size()));
  for (int i = 0; i < theta.size(); ++i) {
    // theta = +1 -> log(2/0) = +inf, theta = -1 -> log(0/2) = -inf.
    w.weights.push_back(std::log((1.0 + theta[i]) / (1.0 - theta[i])));
  }
  return w;
}

namespace {

Prediction decide(double score, Rng& rng) {
  Prediction p;
  p.score = score;
  if (score > 0.0) {
    p.value = +1;
  } else if (score < 0.0) {
    p.value = -1;
  } else {
    // score == 0, or NaN from opposing infinite weights.
    p.value = rng.coin_pm1();
    p.tie_broken = true;
  }
  return p;
}

}  // namespace

Prediction weighted_majority(std::span<const Answer> x, const WeightVector& w, Rng& rng) {
  if (x.size() != w.weights.size()) {
    throw std::invalid_argument("answer vector and weight vector lengths differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    sum += w.weights[i] * x[i];
  }
  const double n = x.empty() ? 1.0 : static_cast<double>(x.size());
  return decide(sum / n, rng);
}

Prediction majority(std::span<const Answer> x, Rng& rng) {
  double sum = 0.0;
  for (const Answer a : x) sum += a;
  const double n = x.empty() ? 1.0 : static_cast<double>(x.size());
  return decide(sum / n, rng);
}

OnlinePlugInPredictor::OnlinePlugInPredictor(int n, std::uint64_t seed)
    : state_(n), seed_(seed) {}

Prediction OnlinePlugInPredictor::predict_and_ingest(std::span<const Answer> x) {
  Rng rng = Rng::derive(seed_, {task_index_++});
  const WeightVector weights = weights_from_theta(state_.estimate().theta_hat);
  const Prediction prediction = weighted_majority(x, weights, rng);
  state_.update(x);
  return prediction;
}

DatasetPrediction predict_dataset(const std::vector<TaskSample>& samples,
                                  const ReliabilityVector& theta, std::uint64_t seed) {
  const WeightVector w = weights_from_theta(theta);
  DatasetPrediction out;
  out.predictions.reserve(samples.size());
  std::size_t wrong = 0;
  for (std::size_t task = 0; task < samples.size(); ++task) {
    Rng rng = Rng::derive(seed, {task});
    const Prediction p = weighted_majority(std::span<const Answer>(samples[task].answers), w, rng);
    if (p.value != samples[task].ground_truth) ++wrong;
    out.predictions.push_back(p);
  }
  out.error_rate = samples.empty() ? 0.0 : static_cast<double>(wrong) / samples.size();
  return out;
}

}  // namespace crowdte
