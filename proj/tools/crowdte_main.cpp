#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crowdte/cli.hpp"
#include "crowdte/kernels.hpp"

namespace {

using crowdte::InstanceKind;
using crowdte::InstanceSpec;

struct InstanceFlags {
  std::string instance = "i";
  double a = 0.9;
  double b = 1.0;
  int n = 50;
  std::int64_t t = -1;  // -1: preset default
  double alpha = 0.25;
};

void add_instance_flags(CLI::App* cmd, InstanceFlags& flags) {
  cmd->add_option("--instance", flags.instance, "instance family: i, ii or iii")
      ->check(CLI::IsMember({"i", "ii", "iii"}));
  cmd->add_option("--a", flags.a, "reliability level a");
  cmd->add_option("--b", flags.b, "total reliability b of the weak block (family iii)");
  cmd->add_option("--n", flags.n, "worker count");
  cmd->add_option("--t", flags.t, "tasks per run (default 1000 for i, 10000 for ii/iii)");
  cmd->add_option("--alpha", flags.alpha, "answer probability");
}

InstanceSpec build_instance(const InstanceFlags& flags) {
  if (flags.instance == "i") {
    return InstanceSpec::half_informative(flags.a, flags.n, flags.t < 0 ? 1000 : flags.t,
                                          flags.alpha);
  }
  if (flags.instance == "ii") {
    return InstanceSpec::three_informative(flags.a, flags.n, flags.t < 0 ? 10000 : flags.t,
                                           flags.alpha);
  }
  return InstanceSpec::sign_hard(flags.b, flags.a, flags.n, flags.t < 0 ? 10000 : flags.t,
                                 flags.alpha);
}

crowdte::BinarizationConfig build_binarization(const std::vector<std::string>& positive,
                                               const std::vector<std::string>& negative) {
  if (positive.empty() != negative.empty()) {
    throw CLI::ValidationError("--positive and --negative must be given together");
  }
  if (positive.empty()) return crowdte::BinarizationConfig::plus_minus_one();
  return crowdte::BinarizationConfig({positive.begin(), positive.end()},
                                     {negative.begin(), negative.end()});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming worker-reliability estimation and label aggregation"};
  app.require_subcommand(1);
  app.set_config("--config");
  app.set_version_flag("--version", "crowdte 1.0");

  // bench ------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "synthetic benchmark over seeded runs");
  InstanceFlags bench_instance;
  add_instance_flags(bench, bench_instance);
  crowdte::cli::BenchOptions bench_options;
  std::string algorithms = "te,majority,oracle";
  bench->add_option("--runs", bench_options.config.runs, "independent runs")->default_val(200);
  bench->add_option("--seed", bench_options.config.seed, "stream seed")->default_val(1);
  bench->add_option("--algorithms", algorithms, "comma list of te,majority,oracle");
  bench->add_option("--threads", bench_options.config.threads, "worker threads (0 = auto)");
  bench->add_option("--format", bench_options.format, "csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));
  bench->add_option("--output", bench_options.output, "table file");

  // estimate ----------------------------------------------------------------
  auto* estimate = app.add_subcommand("estimate", "reliability estimates from a label file");
  crowdte::cli::EstimateOptions estimate_options;
  std::vector<std::string> est_positive, est_negative;
  estimate->add_option("--labels", estimate_options.labels, "label CSV/TSV")->required();
  estimate->add_option("--output", estimate_options.output, "estimates CSV")->required();
  estimate->add_option("--min-worker-labels", estimate_options.min_worker_labels,
                       "drop workers with fewer labels")->default_val(10);
  estimate->add_option("--positive", est_positive, "label values mapped to +1");
  estimate->add_option("--negative", est_negative, "label values mapped to -1");

  // predict -----------------------------------------------------------------
  auto* predict = app.add_subcommand("predict", "plug-in and majority predictions");
  crowdte::cli::PredictOptions predict_options;
  std::string gold_path;
  std::vector<std::string> pred_positive, pred_negative;
  predict->add_option("--labels", predict_options.labels, "label CSV/TSV")->required();
  predict->add_option("--gold", gold_path, "gold CSV/TSV (optional)");
  predict->add_option("--output", predict_options.output, "predictions CSV")->required();
  predict->add_option("--min-worker-labels", predict_options.min_worker_labels,
                      "drop workers with fewer labels")->default_val(10);
  predict->add_option("--seed", predict_options.seed, "tie-break seed")->default_val(1);
  predict->add_option("--positive", pred_positive, "label values mapped to +1");
  predict->add_option("--negative", pred_negative, "label values mapped to -1");

  // bounds ------------------------------------------------------------------
  auto* bounds = app.add_subcommand("bounds", "verify divergence and tail bounds");
  crowdte::cli::BoundsOptions bounds_options;
  bounds->add_option("--sweep", bounds_options.sweep,
                     "lemma1, thresholds, concentration, chernoff or all")
      ->check(CLI::IsMember({"lemma1", "thresholds", "concentration", "chernoff", "all"}));
  bounds->add_option("--output", bounds_options.output, "report CSV");
  bounds->add_option("--trials", bounds_options.trials, "Monte Carlo trials")->default_val(10000);
  bounds->add_option("--seed", bounds_options.seed, "Monte Carlo seed")->default_val(5);
  bounds
      ->add_option("--kl-bound-scale", bounds_options.kl_bound_scale,
                   "scale the divergence caps (testing hook; 1.0 for real checks)")
      ->default_val(1.0);

  // simulate ----------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "serialize one synthetic run");
  InstanceFlags sim_instance;
  add_instance_flags(simulate, sim_instance);
  crowdte::cli::SimulateOptions simulate_options;
  std::string theta_path;
  simulate->add_option("--seed", simulate_options.seed, "run seed")->default_val(1);
  simulate->add_option("--output", simulate_options.labels_output, "label CSV")->required();
  simulate->add_option("--gold-output", simulate_options.gold_output, "gold CSV")->required();
  simulate->add_option("--theta-output", theta_path, "realized reliability CSV (optional)");

  // simd control, mostly for benchmarking the lanes against each other ------
  std::string simd_lane;
  app.add_option("--simd", simd_lane, "force a kernel lane: scalar, avx2, neon or auto")
      ->check(CLI::IsMember({"scalar", "avx2", "neon", "auto"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return crowdte::cli::kExitUsage;
  }

  try {
    if (!simd_lane.empty()) {
      using crowdte::kernels::Lane;
      const Lane lane = simd_lane == "scalar" ? Lane::Scalar
                        : simd_lane == "avx2" ? Lane::Avx2
                        : simd_lane == "neon" ? Lane::Neon
                                              : Lane::Auto;
      if (!crowdte::kernels::select_lane(lane)) {
        std::cerr << "kernel lane '" << simd_lane << "' is not available on this host\n";
        return crowdte::cli::kExitUsage;
      }
    }

    if (bench->parsed()) {
      bench_options.config.instance = build_instance(bench_instance);
      bench_options.config.run_te = algorithms.find("te") != std::string::npos;
      bench_options.config.run_majority = algorithms.find("majority") != std::string::npos;
      bench_options.config.run_oracle = algorithms.find("oracle") != std::string::npos;
      return crowdte::cli::cmd_bench(bench_options, std::cout);
    }
    if (estimate->parsed()) {
      estimate_options.binarization = build_binarization(est_positive, est_negative);
      return crowdte::cli::cmd_estimate(estimate_options, std::cout);
    }
    if (predict->parsed()) {
      predict_options.binarization = build_binarization(pred_positive, pred_negative);
      if (!gold_path.empty()) predict_options.gold = gold_path;
      return crowdte::cli::cmd_predict(predict_options, std::cout);
    }
    if (bounds->parsed()) {
      return crowdte::cli::cmd_bounds(bounds_options, std::cout);
    }
    if (simulate->parsed()) {
      simulate_options.instance = build_instance(sim_instance);
      if (!theta_path.empty()) simulate_options.theta_output = theta_path;
      return crowdte::cli::cmd_simulate(simulate_options, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return crowdte::cli::kExitUsage;
  }
  return crowdte::cli::kExitUsage;
}
