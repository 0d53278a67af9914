#include "crowdte/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "crowdte/aggregation.hpp"
#include "crowdte/bounds.hpp"
#include "crowdte/rng.hpp"
#include "crowdte/te.hpp"

namespace crowdte::cli {

namespace {

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  return out;
}

struct LoadedDataset {
  Dataset dataset;
  TaskTable table;
};

LoadedDataset load_filtered(const std::filesystem::path& labels,
                            const BinarizationConfig& binarization,
                            std::int64_t min_worker_labels, std::ostream& log) {
  const ParsedLabels parsed = parse_labels(labels, label_format_for_path(labels));
  if (parsed.duplicates > 0) {
    log << "warning: " << parsed.duplicates
        << " duplicate (task, worker) rows; kept the last occurrence of each\n";
  }
  if (parsed.records.empty()) {
    throw std::runtime_error(labels.string() + ": no label rows");
  }
  Dataset dataset =
      filter_workers(Dataset::from_records(binarize(parsed.records, binarization)),
                     min_worker_labels);
  if (dataset.num_workers() < 3) {
    throw std::runtime_error(
        "only " + std::to_string(dataset.num_workers()) + " workers remain after the " +
        std::to_string(min_worker_labels) +
        "-label filter; reliability estimation is identifiable only with at least 3 "
        "informative workers");
  }
  LoadedDataset out{std::move(dataset), {}};
  out.table = to_task_samples(out.dataset);
  return out;
}

}  // namespace

int cmd_estimate(const EstimateOptions& options, std::ostream& log) {
  LoadedDataset loaded = load_filtered(options.labels, options.binarization,
                                       options.min_worker_labels, log);
  TeState state(loaded.dataset.num_workers());
  for (const TaskSample& sample : loaded.table.samples) state.update(sample);
  const TeEstimate estimate = state.estimate();

  std::ofstream out = open_output(options.output);
  out << "worker,theta_hat,abs_theta,pair_i,pair_j,is_k_star\n";
  const auto& workers = loaded.dataset.worker_ids();
  for (int k = 0; k < loaded.dataset.num_workers(); ++k) {
    const auto [i, j] = estimate.pairs[static_cast<std::size_t>(k)];
    out << workers[static_cast<std::size_t>(k)] << ','
        << fmt(estimate.theta_hat[k]) << ','
        << fmt(estimate.abs_theta[static_cast<std::size_t>(k)]) << ','
        << workers[static_cast<std::size_t>(i)] << ',' << workers[static_cast<std::size_t>(j)]
        << ',' << (k == estimate.k_star ? 1 : 0) << '\n';
  }
  log << "estimated " << loaded.dataset.num_workers() << " workers from "
      << loaded.dataset.num_tasks() << " tasks (" << state.task_count() << " ingested)\n";
  return kExitOk;
}

int cmd_predict(const PredictOptions& options, std::ostream& log, PredictSummary* summary) {
  LoadedDataset loaded = load_filtered(options.labels, options.binarization,
                                       options.min_worker_labels, log);
  if (options.gold.has_value()) {
    loaded.dataset.attach_gold(
        parse_gold(*options.gold, label_format_for_path(*options.gold), options.binarization));
    loaded.table = to_task_samples(loaded.dataset);
  }

  TeState state(loaded.dataset.num_workers());
  for (const TaskSample& sample : loaded.table.samples) state.update(sample);
  const TeEstimate estimate = state.estimate();
  const WeightVector te_weights = weights_from_theta(estimate.theta_hat);

  std::ofstream out = open_output(options.output);
  out << "task,te_prediction,te_tie,majority_prediction,majority_tie\n";

  std::int64_t scored = 0, te_wrong = 0, majority_wrong = 0;
  for (std::int64_t task = 0; task < loaded.dataset.num_tasks(); ++task) {
    const TaskSample& sample = loaded.table.samples[static_cast<std::size_t>(task)];
    const std::span<const Answer> answers(sample.answers);

    Rng te_rng = Rng::derive(options.seed, {21, static_cast<std::uint64_t>(task)});
    Rng majority_rng = Rng::derive(options.seed, {22, static_cast<std::uint64_t>(task)});
    const Prediction te_prediction = weighted_majority(answers, te_weights, te_rng);
    const Prediction majority_prediction = majority(answers, majority_rng);

    out << loaded.dataset.task_ids()[static_cast<std::size_t>(task)] << ','
        << static_cast<int>(te_prediction.value) << ',' << (te_prediction.tie_broken ? 1 : 0)
        << ',' << static_cast<int>(majority_prediction.value) << ','
        << (majority_prediction.tie_broken ? 1 : 0) << '\n';

    if (loaded.table.has_gold[static_cast<std::size_t>(task)]) {
      ++scored;
      if (te_prediction.value != sample.ground_truth) ++te_wrong;
      if (majority_prediction.value != sample.ground_truth) ++majority_wrong;
    }
  }

  PredictSummary local;
  local.tasks = loaded.dataset.num_tasks();
  local.scored_tasks = scored;
  if (scored > 0) {
    local.te_error = static_cast<double>(te_wrong) / static_cast<double>(scored);
    local.majority_error = static_cast<double>(majority_wrong) / static_cast<double>(scored);
    log << "prediction error over " << scored << " gold tasks: te "
        << fmt(*local.te_error, "%.6g") << ", majority " << fmt(*local.majority_error, "%.6g")
        << '\n';
  } else {
    log << "no gold labels; wrote predictions for " << local.tasks << " tasks\n";
  }
  if (summary != nullptr) *summary = local;
  return kExitOk;
}

namespace {

void write_bound_header(std::ostream& out) {
  out << "check,kind,n,a,b,alpha,epsilon,delta,t,trials,mu,mu_prime,lhs,rhs,satisfied,vacuous\n";
}

void write_bound_row(std::ostream& out, const bounds::BoundReport& r) {
  const auto num = [](double v) { return v == 0.0 ? std::string("0") : fmt(v, "%.10g"); };
  out << r.check << ',' << r.kind << ',' << r.params.n << ',' << num(r.params.a) << ','
      << num(r.params.b) << ',' << num(r.params.alpha) << ',' << num(r.params.epsilon) << ','
      << num(r.params.delta) << ',' << r.params.t << ',' << r.params.trials << ','
      << num(r.params.mu) << ',' << num(r.params.mu_prime) << ',' << num(r.lhs) << ','
      << num(r.rhs) << ',' << (r.satisfied ? 1 : 0) << ',' << (r.vacuous ? 1 : 0) << '\n';
}

void sweep_lemma1(std::vector<bounds::BoundReport>& reports, double scale) {
  const double alphas[] = {0.1, 0.25, 0.5, 1.0};
  for (int ai = 1; ai <= 9; ++ai) {
    const double a = ai / 10.0;
    for (const double alpha : alphas) {
      const double eps_max = std::min(a, std::min((1.0 - a) / 2.0, 0.25));
      for (int k = 1; k <= 5; ++k) {
        const double epsilon = eps_max * k / 6.0;
        reports.push_back(bounds::verify_lemma1(bounds::HardInstanceKind::AbsHard, 3, a, 0.5,
                                                epsilon, alpha, scale));
      }
      for (int n = 5; n <= 8; ++n) {
        for (const double b : {0.25, 0.5, 1.0}) {
          reports.push_back(bounds::verify_lemma1(bounds::HardInstanceKind::SignHard, n, a, b,
                                                  0.0, alpha, scale));
        }
      }
    }
  }
}

void sweep_thresholds(std::vector<bounds::BoundReport>& reports) {
  for (const double a : {0.3, 0.5, 0.7}) {
    for (const double b : {0.5, 1.0, 7.0710678118654755}) {
      // delta = 1/4 zeroes the impossibility thresholds (log(1/(4 delta))
      // vanishes); the row documents that boundary.
      for (const double delta : {0.1, 0.25}) {
        const auto th = bounds::sample_complexity_thresholds(a, b, 0.25, 0.05, delta, 50);
        bounds::BoundReport abs_row;
        abs_row.check = "threshold_dominance_abs";
        abs_row.kind = "analytic";
        abs_row.params = {50, a, b, 0.25, 0.05, delta, 0, 0, 0.0, 0.0};
        abs_row.lhs = th.lower_abs;
        abs_row.rhs = th.upper_abs;
        abs_row.satisfied = abs_row.lhs <= abs_row.rhs;
        reports.push_back(abs_row);

        bounds::BoundReport sign_row = abs_row;
        sign_row.check = "threshold_dominance_sign";
        sign_row.lhs = th.lower_sign;
        sign_row.rhs = th.upper_sign;
        sign_row.satisfied = sign_row.lhs <= sign_row.rhs;
        reports.push_back(sign_row);
      }
    }
  }
}

void sweep_concentration(std::vector<bounds::BoundReport>& reports, std::int64_t trials,
                         std::uint64_t seed) {
  std::vector<double> theta(10, 0.0);
  for (int i = 0; i < 5; ++i) theta[static_cast<std::size_t>(i)] = 0.9;
  const auto rows = bounds::concentration_tail_check(ReliabilityVector(theta), 0.25, 500, 0.3,
                                                     trials, seed);
  reports.insert(reports.end(), rows.begin(), rows.end());
}

void sweep_chernoff(std::vector<bounds::BoundReport>& reports, std::int64_t trials,
                    std::uint64_t seed) {
  for (int i = 1; i <= 49; i += 2) {
    const double mu = i / 100.0;
    for (const auto& r : bounds::verify_chernoff(mu, 2.0 * mu <= 1.0 ? 2.0 * mu : 0.5, 1, 1000,
                                                 seed)) {
      if (r.kind == "analytic") reports.push_back(r);
    }
  }
  for (const double mu_prime : {0.5, 0.125}) {
    for (const auto& r : bounds::verify_chernoff(0.25, mu_prime, 60, trials, seed)) {
      if (r.kind == "monte_carlo") reports.push_back(r);
    }
  }
}

}  // namespace

int cmd_bounds(const BoundsOptions& options, std::ostream& log) {
  const bool all = options.sweep == "all";
  if (!all && options.sweep != "lemma1" && options.sweep != "thresholds" &&
      options.sweep != "concentration" && options.sweep != "chernoff") {
    throw std::invalid_argument("unknown sweep: " + options.sweep);
  }

  std::vector<bounds::BoundReport> reports;
  if (all || options.sweep == "lemma1") sweep_lemma1(reports, options.kl_bound_scale);
  if (all || options.sweep == "thresholds") sweep_thresholds(reports);
  if (all || options.sweep == "concentration") {
    sweep_concentration(reports, options.trials, options.seed);
  }
  if (all || options.sweep == "chernoff") sweep_chernoff(reports, options.trials, options.seed);

  std::int64_t violations = 0, vacuous = 0;
  for (const auto& r : reports) {
    if (r.vacuous) ++vacuous;
    if (!r.satisfied && !r.vacuous) ++violations;
  }

  if (!options.output.empty()) {
    std::ofstream out = open_output(options.output);
    write_bound_header(out);
    for (const auto& r : reports) write_bound_row(out, r);
  }

  log << reports.size() << " checks, " << violations << " violations, " << vacuous
      << " vacuous\n";
  return violations == 0 ? kExitOk : kExitViolation;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& log) {
  const RunData run = generate_run(options.instance, options.seed);
  {
    std::ofstream out = open_output(options.labels_output);
    write_labels_csv(out, run.samples);
  }
  {
    std::ofstream out = open_output(options.gold_output);
    write_gold_csv(out, run.samples);
  }
  if (options.theta_output.has_value()) {
    std::ofstream out = open_output(*options.theta_output);
    out << "worker,theta\n";
    for (int i = 0; i < run.theta.size(); ++i) {
      char id[32];
      std::snprintf(id, sizeof id, "w%05d", i);
      out << id << ',' << fmt(run.theta[i]) << '\n';
    }
  }
  log << "wrote " << run.samples.size() << " tasks for " << options.instance.label() << '\n';
  return kExitOk;
}

int cmd_bench(const BenchOptions& options, std::ostream& log) {
  const BenchResult result = run_bench(options.config);
  const std::string table =
      options.format == "markdown" ? render_bench_markdown(result) : render_bench_csv(result);
  if (!options.output.empty()) {
    std::ofstream out = open_output(options.output);
    out << table;
  }
  log << table;
  log << "# " << result.runs << " runs in " << fmt(result.wall_seconds, "%.2f") << " s\n";
  return kExitOk;
}

}  // namespace crowdte::cli
