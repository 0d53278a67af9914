#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "crowdte/bench.hpp"
#include "crowdte/cli.hpp"
#include "crowdte/te.hpp"
#include "doctest.h"

using namespace crowdte;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("bench results are reproducible for a fixed seed") {
  BenchConfig config;
  config.instance = InstanceSpec::half_informative(0.9, 12, 150, 0.5);
  config.runs = 8;
  config.seed = 99;
  config.threads = 2;
  const BenchResult a = run_bench(config);
  const BenchResult b = run_bench(config);
  CHECK(a.te_estimation_error->mean == b.te_estimation_error->mean);
  CHECK(a.te_prediction_error->mean == b.te_prediction_error->mean);
  CHECK(a.majority_prediction_error->mean == b.majority_prediction_error->mean);
  CHECK(a.oracle_prediction_error->mean == b.oracle_prediction_error->mean);
  CHECK(a.te_estimation_error->std_error == b.te_estimation_error->std_error);

  // Thread count must not change the aggregate.
  config.threads = 1;
  const BenchResult c = run_bench(config);
  CHECK(a.te_estimation_error->mean == c.te_estimation_error->mean);
}

TEST_CASE("standard errors shrink with the run count") {
  BenchConfig config;
  config.instance = InstanceSpec::half_informative(0.6, 12, 120, 0.5);
  config.seed = 7;
  config.run_majority = false;
  config.run_oracle = false;

  config.runs = 100;
  const BenchResult coarse = run_bench(config);
  config.runs = 400;
  const BenchResult fine = run_bench(config);

  CHECK(fine.te_estimation_error->std_error < coarse.te_estimation_error->std_error);
  const double ratio = coarse.te_estimation_error->std_error /
                       fine.te_estimation_error->std_error;
  CHECK(ratio > 1.3);
  CHECK(ratio < 3.0);
}

TEST_CASE("oracle weighting beats plain majority") {
  BenchConfig config;
  config.instance = InstanceSpec::half_informative(0.9, 20, 300, 0.5);
  config.runs = 40;
  config.seed = 55;
  config.run_te = false;
  const BenchResult result = run_bench(config);
  const double oracle = result.oracle_prediction_error->mean;
  const double maj = result.majority_prediction_error->mean;
  const double slack = 2.0 * (result.oracle_prediction_error->std_error +
                              result.majority_prediction_error->std_error);
  CHECK(oracle <= maj + slack);
}

TEST_CASE("estimation error improves with longer streams") {
  BenchConfig config;
  config.instance = InstanceSpec::half_informative(0.9);  // n = 50, alpha = 0.25
  config.runs = 100;
  config.seed = 1234;
  config.run_majority = false;
  config.run_oracle = false;

  config.instance.t = 1000;
  const BenchResult short_stream = run_bench(config);
  config.instance.t = 10000;
  const BenchResult long_stream = run_bench(config);
  CHECK(long_stream.te_estimation_error->mean < short_stream.te_estimation_error->mean);
}

TEST_CASE("reference rows exist exactly for the published instances") {
  // Family (i): prediction references at the stated t = 1e3, the estimation
  // reference at the t = 1e4 the published column was generated with.
  const auto pred = reference_row(InstanceSpec::half_informative(0.9));
  REQUIRE(pred.has_value());
  CHECK(pred->te_prediction_error.has_value());
  CHECK_FALSE(pred->te_estimation_error_accuracy.has_value());
  const auto est = reference_row(InstanceSpec::half_informative(0.9, 50, 10000));
  REQUIRE(est.has_value());
  CHECK(est->te_estimation_error_accuracy == 0.038);
  CHECK_FALSE(est->te_prediction_error.has_value());

  const auto full = reference_row(InstanceSpec::three_informative(0.55));
  REQUIRE(full.has_value());
  CHECK(full->te_estimation_error_accuracy == 0.050);
  CHECK(full->majority_prediction_error == 0.441);
  CHECK(reference_row(InstanceSpec::sign_hard(1.0)).has_value());
  CHECK_FALSE(reference_row(InstanceSpec::half_informative(0.7)).has_value());
  CHECK_FALSE(reference_row(InstanceSpec::half_informative(0.9, 50, 500)).has_value());
}

TEST_CASE("bench renderers produce one row per enabled metric") {
  BenchConfig config;
  config.instance = InstanceSpec::half_informative(0.9, 10, 60, 0.5);
  config.runs = 4;
  const BenchResult result = run_bench(config);
  CHECK(result.te_estimation_error_accuracy->mean ==
        doctest::Approx(result.te_estimation_error->mean / 2.0));
  const std::string csv = render_bench_csv(result);
  CHECK(csv.find("estimation_error,te,") != std::string::npos);
  CHECK(csv.find("estimation_error_accuracy,te,") != std::string::npos);
  CHECK(csv.find("prediction_error,majority,") != std::string::npos);
  CHECK(csv.find("prediction_error,oracle,") != std::string::npos);
  const std::string md = render_bench_markdown(result);
  CHECK(md.find("| majority |") != std::string::npos);
}

TEST_CASE("simulate, estimate and predict agree with the in-process pipeline") {
  const auto labels = temp_path("crowdte_cli_labels.csv");
  const auto gold = temp_path("crowdte_cli_gold.csv");
  const auto theta_out = temp_path("crowdte_cli_theta.csv");
  const auto estimates = temp_path("crowdte_cli_estimates.csv");
  const auto predictions = temp_path("crowdte_cli_predictions.csv");

  cli::SimulateOptions simulate;
  simulate.instance = InstanceSpec::half_informative(0.9, 25, 600, 0.5);
  simulate.seed = 4242;
  simulate.labels_output = labels;
  simulate.gold_output = gold;
  simulate.theta_output = theta_out;
  std::ostringstream log;
  REQUIRE(cli::cmd_simulate(simulate, log) == cli::kExitOk);

  // In-process reference: same run, streamed directly.
  const RunData run = generate_run(simulate.instance, simulate.seed);
  TeState state(simulate.instance.n);
  for (const auto& sample : run.samples) state.update(sample);
  const TeEstimate expected = state.estimate();

  cli::EstimateOptions estimate;
  estimate.labels = labels;
  estimate.output = estimates;
  REQUIRE(cli::cmd_estimate(estimate, log) == cli::kExitOk);

  std::ifstream in(estimates);
  std::string header;
  std::getline(in, header);
  CHECK(header == "worker,theta_hat,abs_theta,pair_i,pair_j,is_k_star");
  int row = 0;
  for (std::string line; std::getline(in, line); ++row) {
    const auto first_comma = line.find(',');
    const auto second_comma = line.find(',', first_comma + 1);
    const std::string theta_text = line.substr(first_comma + 1, second_comma - first_comma - 1);
    CHECK(std::strtod(theta_text.c_str(), nullptr) == expected.theta_hat[row]);
  }
  CHECK(row == 25);

  cli::PredictOptions predict;
  predict.labels = labels;
  predict.gold = gold;
  predict.output = predictions;
  cli::PredictSummary summary;
  REQUIRE(cli::cmd_predict(predict, log, &summary) == cli::kExitOk);
  CHECK(summary.scored_tasks == 600);
  REQUIRE(summary.te_error.has_value());
  REQUIRE(summary.majority_error.has_value());
  CHECK(*summary.te_error <= *summary.majority_error);

  // Byte-identical reruns.
  const std::string first = read_file(predictions);
  REQUIRE(cli::cmd_predict(predict, log, nullptr) == cli::kExitOk);
  CHECK(first == read_file(predictions));

  // Without gold the error fields stay empty.
  cli::PredictOptions no_gold = predict;
  no_gold.gold.reset();
  cli::PredictSummary plain;
  REQUIRE(cli::cmd_predict(no_gold, log, &plain) == cli::kExitOk);
  CHECK(plain.scored_tasks == 0);
  CHECK_FALSE(plain.te_error.has_value());
}

TEST_CASE("estimate refuses under-identified inputs") {
  const auto labels = temp_path("crowdte_cli_two_workers.csv");
  {
    std::ofstream out(labels);
    out << "task,worker,label\n";
    for (int t = 0; t < 30; ++t) {
      out << 't' << t << ",w1," << (t % 2 == 0 ? "1" : "-1") << '\n';
      out << 't' << t << ",w2,1\n";
    }
  }
  cli::EstimateOptions estimate;
  estimate.labels = labels;
  estimate.output = temp_path("crowdte_cli_unused.csv");
  std::ostringstream log;
  CHECK_THROWS_WITH_AS(cli::cmd_estimate(estimate, log), doctest::Contains("at least 3"),
                       std::runtime_error);

  const auto header_only = temp_path("crowdte_cli_header_only.csv");
  {
    std::ofstream out(header_only);
    out << "task,worker,label\n";
  }
  estimate.labels = header_only;
  CHECK_THROWS_WITH_AS(cli::cmd_estimate(estimate, log), doctest::Contains("no label rows"),
                       std::runtime_error);
}

TEST_CASE("bounds sweeps pass clean and catch corrupted caps") {
  std::ostringstream log;
  cli::BoundsOptions clean;
  clean.sweep = "lemma1";
  clean.output = temp_path("crowdte_cli_bounds.csv");
  CHECK(cli::cmd_bounds(clean, log) == cli::kExitOk);
  const std::string csv = read_file(clean.output);
  CHECK(csv.find("abs_hard") != std::string::npos);
  CHECK(csv.find("sign_hard") != std::string::npos);

  cli::BoundsOptions thresholds;
  thresholds.sweep = "thresholds";
  CHECK(cli::cmd_bounds(thresholds, log) == cli::kExitOk);

  cli::BoundsOptions corrupted = clean;
  corrupted.kl_bound_scale = 0.01;
  corrupted.output.clear();
  CHECK(cli::cmd_bounds(corrupted, log) == cli::kExitViolation);
}
