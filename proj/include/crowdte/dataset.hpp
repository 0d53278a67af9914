#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crowdte/model.hpp"

namespace crowdte {

struct RawLabelRecord {
  std::string task;
  std::string worker;
  std::string label;
};

enum class LabelFileFormat { Csv, Tsv };

LabelFileFormat label_format_for_path(const std::filesystem::path& path);

struct ParsedLabels {
  std::vector<RawLabelRecord> records;  // duplicates already resolved, last wins
  std::int64_t duplicates = 0;
};

// Reads a label file with header task,worker,label (comma or tab separated;
// quoted fields allowed). Malformed rows raise with the offending line
// number. A repeated (task, worker) pair keeps the last record and bumps the
// duplicate counter.
ParsedLabels parse_labels(const std::filesystem::path& path, LabelFileFormat format);

// Maps raw label strings onto {-1, +1}.
struct BinarizationConfig {
  std::set<std::string> positive;
  std::set<std::string> negative;

  BinarizationConfig(std::set<std::string> positive_in, std::set<std::string> negative_in);
  // Labels written as "1" / "-1" (also accepts "+1").
  static BinarizationConfig plus_minus_one();
};

struct BinaryLabelRecord {
  std::string task;
  std::string worker;
  std::int8_t value = +1;
};

// Fails listing every label value the config does not cover.
std::vector<BinaryLabelRecord> binarize(const std::vector<RawLabelRecord>& records,
                                        const BinarizationConfig& config);

struct DatasetStats {
  std::int64_t num_tasks = 0;
  std::int64_t num_workers = 0;
  std::int64_t num_labels = 0;
  double density = 0.0;        // labels / (tasks * workers)
  double worker_degree = 0.0;  // labels / workers
};

// Sparse task x worker label matrix with canonical indexing: tasks and
// workers are ranked by the lexicographic order of their external ids, so a
// dataset's layout does not depend on row order in the file.
class Dataset {
 public:
  static Dataset from_records(const std::vector<BinaryLabelRecord>& records);

  int num_workers() const { return static_cast<int>(worker_ids_.size()); }
  std::int64_t num_tasks() const { return static_cast<std::int64_t>(task_ids_.size()); }
  const std::vector<std::string>& worker_ids() const { return worker_ids_; }
  const std::vector<std::string>& task_ids() const { return task_ids_; }

  const std::vector<std::pair<int, std::int8_t>>& labels_for_task(std::int64_t task) const {
    return by_task_[static_cast<std::size_t>(task)];
  }
  std::int64_t labels_for_worker(int worker) const {
    return worker_label_counts_[static_cast<std::size_t>(worker)];
  }

  const std::optional<std::vector<std::int8_t>>& gold() const { return gold_; }

  // Attaches per-task truth values; every gold task id must already exist in
  // the dataset (unmatched ids are reported), tasks without gold are allowed
  // and simply not scored.
  void attach_gold(const std::vector<std::pair<std::string, std::int8_t>>& gold_labels);

  DatasetStats stats() const;

 private:
  friend Dataset filter_workers(const Dataset& dataset, std::int64_t min_labels);

  std::vector<std::string> task_ids_;
  std::vector<std::string> worker_ids_;
  std::vector<std::vector<std::pair<int, std::int8_t>>> by_task_;
  std::vector<std::int64_t> worker_label_counts_;
  std::int64_t num_labels_ = 0;
  std::optional<std::vector<std::int8_t>> gold_;  // 0 marks "no gold for this task"
};

// Drops workers with fewer than min_labels labels and reindexes the rest
// densely, preserving canonical order. Tasks that lose all their labels stay
// (they are predicted by tie-break). Idempotent.
Dataset filter_workers(const Dataset& dataset, std::int64_t min_labels = 10);

// Dense per-task answer vectors: 0 where a worker gave no label. Tasks keep
// their gold value when present; tasks without gold carry ground_truth 0 and
// are skipped by error scoring.
struct TaskTable {
  std::vector<TaskSample> samples;          // ground_truth only meaningful where has_gold
  std::vector<bool> has_gold;
};
TaskTable to_task_samples(const Dataset& dataset);

// Gold file: header task,label with the same label domain as the label file.
std::vector<std::pair<std::string, std::int8_t>> parse_gold(const std::filesystem::path& path,
                                                            LabelFileFormat format,
                                                            const BinarizationConfig& config);

// Canonical serialization used by the simulator: zero-padded ids so that
// lexicographic order matches numeric order. Answers written as 1 / -1.
void write_labels_csv(std::ostream& out, const std::vector<TaskSample>& samples);
void write_gold_csv(std::ostream& out, const std::vector<TaskSample>& samples);

}  // namespace crowdte
