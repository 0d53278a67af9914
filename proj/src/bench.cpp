#include "crowdte/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "crowdte/aggregation.hpp"
#include "crowdte/te.hpp"

namespace crowdte {

namespace {

struct RunOutcome {
  double te_estimation_error = 0.0;
  double te_prediction_error = 0.0;
  double majority_prediction_error = 0.0;
  double oracle_prediction_error = 0.0;
};

double max_abs_difference(const ReliabilityVector& a, const ReliabilityVector& b) {
  double sup = 0.0;
  for (int i = 0; i < a.size(); ++i) sup = std::max(sup, std::fabs(a[i] - b[i]));
  return sup;
}

double majority_error(const std::vector<TaskSample>& samples, std::uint64_t seed) {
  std::size_t wrong = 0;
  for (std::size_t task = 0; task < samples.size(); ++task) {
    Rng rng = Rng::derive(seed, {task});
    const Prediction p = majority(std::span<const Answer>(samples[task].answers), rng);
    if (p.value != samples[task].ground_truth) ++wrong;
  }
  return samples.empty() ? 0.0 : static_cast<double>(wrong) / samples.size();
}

RunOutcome execute_run(const BenchConfig& config, int run_index) {
  const std::uint64_t run_seed = mix_seed(config.seed, static_cast<std::uint64_t>(run_index));
  const RunData run = generate_run(config.instance, run_seed);

  RunOutcome out;
  if (config.run_te) {
    TeState state(config.instance.n);
    for (const TaskSample& sample : run.samples) state.update(sample);
    const TeEstimate estimate = state.estimate();
    // Estimation error is scored in the run's own (shuffled) coordinates.
    out.te_estimation_error = max_abs_difference(estimate.theta_hat, run.theta);
    out.te_prediction_error =
        predict_dataset(run.samples, estimate.theta_hat, mix_seed(run_seed, 11)).error_rate;
  }
  if (config.run_majority) {
    out.majority_prediction_error = majority_error(run.samples, mix_seed(run_seed, 12));
  }
  if (config.run_oracle) {
    out.oracle_prediction_error =
        predict_dataset(run.samples, run.theta, mix_seed(run_seed, 13)).error_rate;
  }
  return out;
}

MetricStats summarize(const std::vector<double>& values) {
  MetricStats stats;
  const double n = static_cast<double>(values.size());
  for (const double v : values) stats.mean += v;
  stats.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - stats.mean) * (v - stats.mean);
    stats.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return stats;
}

std::string format_double(double v, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

std::optional<ReferenceRow> reference_row(const InstanceSpec& spec) {
  const auto near = [](double x, double y) { return std::fabs(x - y) < 1e-9; };
  if (spec.n != 50 || !near(spec.alpha, 0.25)) return std::nullopt;
  switch (spec.kind) {
    case InstanceKind::HalfInformative:
      // The published estimation numbers for this family come from t = 1e4
      // runs even though the prediction benchmark uses t = 1e3.
      if (near(spec.a, 0.3)) {
        if (spec.t == 1000) return ReferenceRow{std::nullopt, 0.227, 0.298, 0.250};
        if (spec.t == 10000) return ReferenceRow{0.134, std::nullopt, std::nullopt, std::nullopt};
        return std::nullopt;
      }
      if (near(spec.a, 0.9)) {
        if (spec.t == 1000) return ReferenceRow{std::nullopt, 0.004, 0.046, 0.004};
        if (spec.t == 10000) return ReferenceRow{0.038, std::nullopt, std::nullopt, std::nullopt};
        return std::nullopt;
      }
      return std::nullopt;
    case InstanceKind::ThreeInformative:
      if (spec.t != 10000) return std::nullopt;
      if (near(spec.a, 0.55)) return ReferenceRow{0.050, 0.284, 0.441, 0.284};
      if (near(spec.a, 0.95)) return ReferenceRow{0.039, 0.219, 0.419, 0.219};
      return std::nullopt;
    case InstanceKind::SignHard:
      if (spec.t != 10000 || !near(spec.a, 0.9)) return std::nullopt;
      if (near(spec.b, 1.0)) return ReferenceRow{0.061, 0.181, 0.472, 0.192};
      if (near(spec.b, std::sqrt(50.0))) return ReferenceRow{0.045, 0.126, 0.315, 0.128};
      return std::nullopt;
    case InstanceKind::Explicit:
      return std::nullopt;
  }
  return std::nullopt;
}

BenchResult run_bench(const BenchConfig& config) {
  if (config.runs < 1) throw std::invalid_argument("bench needs at least one run");
  config.instance.validate();

  const auto start = std::chrono::steady_clock::now();

  std::vector<RunOutcome> outcomes(static_cast<std::size_t>(config.runs));
  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, config.runs));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int run = next.fetch_add(1);
      if (run >= config.runs) return;
      outcomes[static_cast<std::size_t>(run)] = execute_run(config, run);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BenchResult result;
  result.instance_label = config.instance.label();
  result.runs = config.runs;
  result.seed = config.seed;
  result.reference = reference_row(config.instance);

  auto collect = [&](auto accessor) {
    std::vector<double> values;
    values.reserve(outcomes.size());
    for (const auto& o : outcomes) values.push_back(accessor(o));
    return summarize(values);
  };
  if (config.run_te) {
    result.te_estimation_error = collect([](const RunOutcome& o) { return o.te_estimation_error; });
    result.te_estimation_error_accuracy =
        MetricStats{result.te_estimation_error->mean / 2.0,
                    result.te_estimation_error->std_error / 2.0};
    result.te_prediction_error = collect([](const RunOutcome& o) { return o.te_prediction_error; });
  }
  if (config.run_majority) {
    result.majority_prediction_error =
        collect([](const RunOutcome& o) { return o.majority_prediction_error; });
  }
  if (config.run_oracle) {
    result.oracle_prediction_error =
        collect([](const RunOutcome& o) { return o.oracle_prediction_error; });
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

struct RowSpec {
  const char* metric;
  const char* algorithm;
  const std::optional<MetricStats>* stats;
  std::optional<double> reference;
};

std::vector<RowSpec> result_rows(const BenchResult& r) {
  const auto ref = [&](auto field) -> std::optional<double> {
    return r.reference.has_value() ? (*r.reference).*field : std::optional<double>{};
  };
  return {
      {"estimation_error", "te", &r.te_estimation_error, std::nullopt},
      {"estimation_error_accuracy", "te", &r.te_estimation_error_accuracy,
       ref(&ReferenceRow::te_estimation_error_accuracy)},
      {"prediction_error", "te", &r.te_prediction_error, ref(&ReferenceRow::te_prediction_error)},
      {"prediction_error", "majority", &r.majority_prediction_error,
       ref(&ReferenceRow::majority_prediction_error)},
      {"prediction_error", "oracle", &r.oracle_prediction_error,
       ref(&ReferenceRow::oracle_prediction_error)},
  };
}

}  // namespace

std::string render_bench_csv(const BenchResult& result) {
  std::ostringstream out;
  out << "instance,metric,algorithm,mean,std_error,runs,reference\n";
  for (const RowSpec& row : result_rows(result)) {
    if (!row.stats->has_value()) continue;
    out << '"' << result.instance_label << "\"," << row.metric << ',' << row.algorithm << ','
        << format_double((*row.stats)->mean) << ',' << format_double((*row.stats)->std_error)
        << ',' << result.runs << ','
        << (row.reference.has_value() ? format_double(*row.reference) : "") << '\n';
  }
  return out.str();
}

std::string render_bench_markdown(const BenchResult& result) {
  std::ostringstream out;
  out << "| instance | metric | algorithm | mean | std error | reference |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const RowSpec& row : result_rows(result)) {
    if (!row.stats->has_value()) continue;
    out << "| " << result.instance_label << " | " << row.metric << " | " << row.algorithm
        << " | " << format_double((*row.stats)->mean, "%.4f") << " | "
        << format_double((*row.stats)->std_error, "%.4f") << " | "
        << (row.reference.has_value() ? format_double(*row.reference, "%.3f") : "") << " |\n";
  }
  return out.str();
}

}  // namespace crowdte
