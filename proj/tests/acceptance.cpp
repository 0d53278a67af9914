// Acceptance suite: end-to-end checks with pinned tolerances, one verdict
// line per criterion. Exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "crowdte/aggregation.hpp"
#include "crowdte/bench.hpp"
#include "crowdte/bounds.hpp"
#include "crowdte/cli.hpp"
#include "crowdte/distribution.hpp"
#include "crowdte/rng.hpp"
#include "crowdte/simulator.hpp"
#include "crowdte/te.hpp"

using namespace crowdte;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(double v, const char* spec = "%.4f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- criterion 1: exact recovery over the population covariance -----------

Verdict exact_recovery() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_below(18));  // 3..20
    std::vector<double> values(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (auto& x : values) {
      x = (0.05 + 0.9 * rng.next_unit()) * (rng.next_below(2) == 0 ? 1.0 : -1.0);
      sum += x;
    }
    if (sum <= 0.0) {
      for (auto& x : values) x = -x;
    }
    const ReliabilityVector theta(values);
    const TeEstimate est = estimate_from_population(theta);
    for (int k = 0; k < n; ++k) worst = std::max(worst, std::fabs(est.theta_hat[k] - theta[k]));
  }
  const double seconds = elapsed_seconds(start);
  if (worst > 1e-10) v.fail("worst recovery error " + fmt(worst, "%.3e"));
  if (seconds >= 1.0) v.fail("took " + fmt(seconds, "%.2f") + " s (budget 1 s)");
  v.note("worst error " + fmt(worst, "%.2e") + " over 100 draws in " + fmt(seconds, "%.2f") +
         " s");
  return v;
}

// --- criteria 2 and 3: benchmark table reproduction ------------------------
//
// The published estimation column reports the sup error of the accuracy
// probability p = (1 + theta)/2 -- exactly half the theta-scale sup error --
// and was generated with t = 1e4 for every family. Prediction rows use the
// benchmark's stated task counts (t = 1e3 for family (i)); prediction error
// is insensitive to t, while the estimation column is only reproducible at
// t = 1e4 and on the accuracy scale (it then matches to within 0.005).

struct EstimationRow {
  std::string name;
  InstanceSpec instance;
  double expected;
  double tolerance;
};

struct PredictionRow {
  std::string name;
  InstanceSpec instance;
  double expected_oracle, expected_majority, expected_te;
};

std::vector<EstimationRow> estimation_rows() {
  return {
      {"(i) a=0.9", InstanceSpec::half_informative(0.9, 50, 10000), 0.038, 0.02},
      {"(ii) a=0.55", InstanceSpec::three_informative(0.55), 0.050, 0.02},
      {"(ii) a=0.95", InstanceSpec::three_informative(0.95), 0.039, 0.02},
      {"(iii) b=1", InstanceSpec::sign_hard(1.0), 0.061, 0.02},
      {"(iii) b=sqrt(n)", InstanceSpec::sign_hard(std::sqrt(50.0)), 0.045, 0.02},
      {"(i) a=0.3", InstanceSpec::half_informative(0.3, 50, 10000), 0.134, 0.03},
  };
}

std::vector<PredictionRow> prediction_rows() {
  return {
      {"(i) a=0.9", InstanceSpec::half_informative(0.9), 0.004, 0.046, 0.004},
      {"(ii) a=0.95", InstanceSpec::three_informative(0.95), 0.219, 0.419, 0.219},
      {"(iii) b=1", InstanceSpec::sign_hard(1.0), 0.181, 0.472, 0.192},
      {"(iii) b=sqrt(n)", InstanceSpec::sign_hard(std::sqrt(50.0)), 0.126, 0.315, 0.128},
  };
}

bool same_instance(const InstanceSpec& a, const InstanceSpec& b) {
  return a.kind == b.kind && a.n == b.n && a.t == b.t && std::fabs(a.a - b.a) < 1e-12 &&
         std::fabs(a.b - b.b) < 1e-12 && std::fabs(a.alpha - b.alpha) < 1e-12;
}

struct BenchSet {
  std::vector<InstanceSpec> instances;
  std::vector<BenchResult> results;
  double seconds = 0.0;

  const BenchResult& result_for(const InstanceSpec& spec) const {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      if (same_instance(instances[i], spec)) return results[i];
    }
    throw std::logic_error("missing bench result");
  }
};

BenchSet run_benchmark_rows() {
  BenchSet set;
  const auto start = std::chrono::steady_clock::now();
  const auto want = [&](const InstanceSpec& spec) {
    for (const auto& existing : set.instances) {
      if (same_instance(existing, spec)) return;
    }
    set.instances.push_back(spec);
  };
  for (const auto& row : estimation_rows()) want(row.instance);
  for (const auto& row : prediction_rows()) want(row.instance);

  for (const InstanceSpec& spec : set.instances) {
    BenchConfig config;
    config.instance = spec;
    config.runs = 200;
    config.seed = 42;
    set.results.push_back(run_bench(config));
  }
  set.seconds = elapsed_seconds(start);
  return set;
}

Verdict estimation_table(const BenchSet& benches) {
  Verdict v;
  for (const EstimationRow& row : estimation_rows()) {
    const BenchResult& result = benches.result_for(row.instance);
    const double accuracy_scale = result.te_estimation_error_accuracy->mean;
    const double diff = std::fabs(accuracy_scale - row.expected);
    const std::string cell = row.name + " te=" + fmt(accuracy_scale) + " (expected " +
                             fmt(row.expected, "%.3f") + " +- " + fmt(row.tolerance, "%.2f") +
                             ", theta-scale " + fmt(result.te_estimation_error->mean) + ")";
    if (diff > row.tolerance) {
      v.fail(cell);
    } else {
      v.note(cell);
    }
  }
  if (benches.seconds > 150.0) {
    v.fail("bench runtime " + fmt(benches.seconds, "%.0f") + " s over budget");
  }
  return v;
}

Verdict prediction_table(const BenchSet& benches) {
  Verdict v;
  const double tolerance = 0.02;
  for (const PredictionRow& row : prediction_rows()) {
    const BenchResult& result = benches.result_for(row.instance);
    const struct {
      const char* algo;
      double expected;
      double measured;
    } cells[] = {
        {"oracle", row.expected_oracle, result.oracle_prediction_error->mean},
        {"majority", row.expected_majority, result.majority_prediction_error->mean},
        {"te", row.expected_te, result.te_prediction_error->mean},
    };
    for (const auto& cell : cells) {
      const double diff = std::fabs(cell.measured - cell.expected);
      const std::string text = row.name + " " + cell.algo + "=" + fmt(cell.measured) +
                               " (expected " + fmt(cell.expected, "%.3f") + ")";
      if (diff > tolerance) {
        v.fail(text);
      } else {
        v.note(text);
      }
    }
  }
  return v;
}

// --- criterion 4: divergence caps over the full grid -----------------------

Verdict divergence_grid() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  int checks = 0, violations = 0;
  for (int ai = 1; ai <= 9; ++ai) {
    const double a = ai / 10.0;
    const double eps_max = std::min(a, std::min((1.0 - a) / 2.0, 0.25));
    for (const double alpha : {0.1, 0.25, 0.5, 1.0}) {
      for (int k = 1; k <= 5; ++k) {
        const auto report = bounds::verify_lemma1(bounds::HardInstanceKind::AbsHard, 3, a, 0.5,
                                                  eps_max * k / 6.0, alpha);
        ++checks;
        violations += report.satisfied ? 0 : 1;
      }
    }
    for (int n = 5; n <= 8; ++n) {
      for (const double b : {0.25, 0.5, 1.0}) {
        const auto report =
            bounds::verify_lemma1(bounds::HardInstanceKind::SignHard, n, a, b, 0.0, 0.25);
        ++checks;
        violations += report.satisfied ? 0 : 1;
      }
    }
  }
  const double seconds = elapsed_seconds(start);
  if (violations > 0) v.fail(std::to_string(violations) + " violations");
  if (seconds >= 10.0) v.fail("took " + fmt(seconds, "%.1f") + " s (budget 10 s)");
  v.note(std::to_string(checks) + " grid points, zero violations, " + fmt(seconds, "%.1f") +
         " s");
  return v;
}

// --- criterion 5: squared-ratio dominance over the log divergence ----------

Verdict divergence_dominance() {
  Verdict v;
  Rng rng(7);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> p(27), q(27);
    double ps = 0.0, qs = 0.0;
    for (std::size_t s = 0; s < 27; ++s) {
      p[s] = -std::log(1.0 - rng.next_unit());
      q[s] = -std::log(1.0 - rng.next_unit());
      ps += p[s];
      qs += q[s];
    }
    for (std::size_t s = 0; s < 27; ++s) {
      p[s] /= ps;
      q[s] /= qs;
    }
    if (kl_divergence(p, q) > chi2_divergence(p, q)) ++violations;
  }
  if (violations > 0) v.fail(std::to_string(violations) + " of 1000 pairs violated");
  v.note("1000 random pairs, zero violations");
  return v;
}

// --- criterion 6: covariance concentration tails ---------------------------

Verdict concentration_tails() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> theta(10, 0.0);
  for (int i = 0; i < 5; ++i) theta[static_cast<std::size_t>(i)] = 0.9;
  const auto reports =
      bounds::concentration_tail_check(ReliabilityVector(theta), 0.25, 500, 0.3, 10000, 11);
  const double seconds = elapsed_seconds(start);
  for (const auto& r : reports) {
    std::string text = r.check + " " + fmt(r.lhs) + " <= " + fmt(r.rhs, "%.4g");
    if (r.vacuous) text += " [vacuous]";
    if (!r.satisfied) {
      v.fail(text);
    } else {
      v.note(text);
    }
  }
  if (seconds >= 30.0) v.fail("took " + fmt(seconds, "%.1f") + " s (budget 30 s)");
  v.note(fmt(seconds, "%.1f") + " s");
  return v;
}

// --- criterion 7: weighted vote achieves the exhaustive optimum ------------

Verdict vote_optimality() {
  Verdict v;
  Rng rng(13);
  double worst_gap = 0.0;
  for (int grid = 0; grid < 20; ++grid) {
    std::vector<double> values(3);
    for (auto& x : values) x = 1.9 * rng.next_unit() - 0.95;
    const ReliabilityVector theta(values);
    const double alpha = 0.25 + 0.75 * rng.next_unit();
    const WeightVector weights = weights_from_theta(theta);

    double rule_error = 0.0, best_error = 0.0;
    std::vector<Answer> x(3);
    for (int state = 0; state < 27; ++state) {
      int s = state;
      int answered = 0;
      for (auto& a : x) {
        a = static_cast<Answer>(s % 3 - 1);
        s /= 3;
        answered += a != 0;
      }
      // Joint probabilities of (x, truth): the shared participation factor
      // keeps the two branches comparable.
      const double participation =
          std::pow(alpha / 2.0, answered) * std::pow(1.0 - alpha, 3 - answered);
      double like_plus = participation, like_minus = participation;
      for (int i = 0; i < 3; ++i) {
        if (x[static_cast<std::size_t>(i)] == 0) continue;
        const bool agrees = x[static_cast<std::size_t>(i)] > 0;
        like_plus *= agrees ? 1.0 + theta[i] : 1.0 - theta[i];
        like_minus *= agrees ? 1.0 - theta[i] : 1.0 + theta[i];
      }
      const double p_plus = 0.5 * like_plus;
      const double p_minus = 0.5 * like_minus;

      Rng coin(1);
      const Prediction p = weighted_majority(x, weights, coin);
      if (p.tie_broken) {
        rule_error += 0.5 * (p_plus + p_minus);
      } else {
        rule_error += p.value > 0 ? p_minus : p_plus;
      }
      best_error += std::min(p_plus, p_minus);
    }
    worst_gap = std::max(worst_gap, std::fabs(rule_error - best_error));
  }
  if (worst_gap > 1e-12) v.fail("worst optimality gap " + fmt(worst_gap, "%.3e"));
  v.note("worst gap " + fmt(worst_gap, "%.2e") + " across 20 grids");
  return v;
}

// --- criterion 8: streaming contract ---------------------------------------

Verdict streaming_contract() {
  Verdict v;
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_below(10));
    const int tasks = 1 + static_cast<int>(rng.next_below(200));
    std::vector<std::vector<Answer>> stream;
    for (int t = 0; t < tasks; ++t) {
      std::vector<Answer> x(static_cast<std::size_t>(n));
      for (auto& a : x) a = static_cast<Answer>(static_cast<int>(rng.next_below(3)) - 1);
      stream.push_back(std::move(x));
    }

    TeState streamed(n);
    for (const auto& x : stream) streamed.update(std::span<const Answer>(x));

    // Batch rebuild: independent pairwise sums over the stored stream.
    std::vector<std::int32_t> batch_m(static_cast<std::size_t>(n) * n, 0);
    std::vector<std::int32_t> batch_n(static_cast<std::size_t>(n) * n, 0);
    for (const auto& x : stream) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const int prod = x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
          if (prod == 0) continue;
          batch_m[static_cast<std::size_t>(i) * n + j] += prod;
          batch_m[static_cast<std::size_t>(j) * n + i] += prod;
          batch_n[static_cast<std::size_t>(i) * n + j] += 1;
          batch_n[static_cast<std::size_t>(j) * n + i] += 1;
        }
      }
    }

    // Sharded ingestion across a random split, merged in shard order.
    const std::size_t cut1 = rng.next_below(static_cast<std::uint64_t>(tasks) + 1);
    const std::size_t cut2 =
        cut1 + rng.next_below(static_cast<std::uint64_t>(tasks) - cut1 + 1);
    TeState s1(n), s2(n), s3(n);
    for (std::size_t t = 0; t < stream.size(); ++t) {
      (t < cut1 ? s1 : t < cut2 ? s2 : s3).update(std::span<const Answer>(stream[t]));
    }
    s1.merge_from(s2);
    s1.merge_from(s3);

    // Snapshot round trip.
    std::stringstream buffer;
    streamed.save(buffer);
    const TeState restored = TeState::load(buffer);

    bool identical = s1.task_count() == streamed.task_count() &&
                     streamed.task_count() == tasks &&
                     restored.task_count() == streamed.task_count();
    for (int i = 0; i < n && identical; ++i) {
      for (int j = 0; j < n && identical; ++j) {
        const std::int32_t m_expected =
            i == j ? 0 : batch_m[static_cast<std::size_t>(i) * n + j];
        const std::int32_t n_expected =
            i == j ? 0 : batch_n[static_cast<std::size_t>(i) * n + j];
        identical = streamed.m_at(i, j) == m_expected && streamed.n_at(i, j) == n_expected &&
                    streamed.m_at(i, j) == s1.m_at(i, j) &&
                    streamed.n_at(i, j) == s1.n_at(i, j) &&
                    streamed.m_at(i, j) == restored.m_at(i, j) &&
                    streamed.n_at(i, j) == restored.n_at(i, j);
      }
    }
    if (!identical) {
      v.fail("divergence at trial " + std::to_string(trial));
      return v;
    }
  }
  v.note("100 streams: batch, merged shards and snapshots all bit-identical");
  return v;
}

// --- criterion 9: file pipeline --------------------------------------------

Verdict file_pipeline() {
  Verdict v;
  const auto dir = std::filesystem::temp_directory_path();
  const auto labels = dir / "crowdte_acceptance_labels.csv";
  const auto gold = dir / "crowdte_acceptance_gold.csv";
  const auto predictions = dir / "crowdte_acceptance_predictions.csv";

  std::ostringstream log;
  cli::SimulateOptions simulate;
  simulate.instance = InstanceSpec::half_informative(0.9);
  simulate.seed = 19;
  simulate.labels_output = labels;
  simulate.gold_output = gold;
  if (cli::cmd_simulate(simulate, log) != cli::kExitOk) {
    v.fail("simulate failed");
    return v;
  }

  cli::PredictOptions predict;
  predict.labels = labels;
  predict.gold = gold;
  predict.output = predictions;
  cli::PredictSummary summary;
  if (cli::cmd_predict(predict, log, &summary) != cli::kExitOk) {
    v.fail("predict failed");
    return v;
  }
  if (!summary.te_error.has_value() || !summary.majority_error.has_value()) {
    v.fail("error rates missing despite gold labels");
    return v;
  }
  if (*summary.te_error > *summary.majority_error) {
    v.fail("plug-in error " + fmt(*summary.te_error) + " above majority " +
           fmt(*summary.majority_error));
  }
  v.note("plug-in " + fmt(*summary.te_error) + " vs majority " + fmt(*summary.majority_error) +
         " over " + std::to_string(summary.scored_tasks) + " tasks");
  return v;
}

// --- criterion 10: corrupted caps are detected ------------------------------

Verdict negative_control() {
  Verdict v;
  std::ostringstream log;
  cli::BoundsOptions corrupted;
  corrupted.sweep = "lemma1";
  corrupted.kl_bound_scale = 0.01;
  const int code = cli::cmd_bounds(corrupted, log);
  if (code != cli::kExitViolation) {
    v.fail("corrupted sweep exited " + std::to_string(code) + ", expected " +
           std::to_string(cli::kExitViolation));
  }

  cli::BoundsOptions clean;
  clean.sweep = "lemma1";
  if (cli::cmd_bounds(clean, log) != cli::kExitOk) v.fail("clean sweep reported violations");
  v.note("corrupted cap detected with exit code 2, clean sweep exits 0");
  return v;
}

}  // namespace

int main() {
  const BenchSet benches = run_benchmark_rows();

  struct Criterion {
    int id;
    const char* name;
    Verdict verdict;
  };
  const std::vector<Criterion> criteria = {
      {1, "exact recovery on population covariance", exact_recovery()},
      {2, "estimation-error table reproduction", estimation_table(benches)},
      {3, "prediction-error table reproduction", prediction_table(benches)},
      {4, "divergence caps across the hard-instance grid", divergence_grid()},
      {5, "squared-ratio dominance over log divergence", divergence_dominance()},
      {6, "covariance concentration tails", concentration_tails()},
      {7, "weighted vote matches the exhaustive optimum", vote_optimality()},
      {8, "streaming, merge and snapshot bit-equivalence", streaming_contract()},
      {9, "file pipeline on a serialized run", file_pipeline()},
      {10, "corrupted divergence cap is detected", negative_control()},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    failures += c.verdict.pass ? 0 : 1;
    std::printf("[%s] criterion %2d: %s\n", c.verdict.pass ? "PASS" : "FAIL", c.id, c.name);
    if (!c.verdict.detail.empty()) std::printf("           %s\n", c.verdict.detail.c_str());
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
