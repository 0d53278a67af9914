#include "crowdte/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace crowdte {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && (s[begin] == ' ' || s[begin] == '\t' || s[begin] == '\r')) ++begin;
  while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r')) --end;
  return s.substr(begin, end - begin);
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::int64_t line,
                             const std::string& message) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + message);
}

// Splits one line on the separator, honouring double-quoted fields with ""
// escapes. Unquoted fields are trimmed.
std::vector<std::string> split_fields(const std::string& line, char sep,
                                      const std::filesystem::path& path, std::int64_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && trim(current).empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
      current.clear();
    } else if (c == sep) {
      fields.push_back(was_quoted ? current : trim(current));
      current.clear();
      was_quoted = false;
    } else {
      current.push_back(c);
    }
  }
  if (quoted) parse_fail(path, line_no, "unterminated quoted field");
  fields.push_back(was_quoted ? current : trim(current));
  return fields;
}

char separator_for(LabelFileFormat format) {
  return format == LabelFileFormat::Tsv ? '\t' : ',';
}

}  // namespace

LabelFileFormat label_format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? LabelFileFormat::Tsv : LabelFileFormat::Csv;
}

ParsedLabels parse_labels(const std::filesystem::path& path, LabelFileFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file: " + path.string());
  const char sep = separator_for(format);

  std::string line;
  std::int64_t line_no = 0;
  if (!std::getline(in, line)) parse_fail(path, 1, "missing header row");
  ++line_no;
  {
    const auto header = split_fields(line, sep, path, line_no);
    if (header.size() != 3 || header[0] != "task" || header[1] != "worker" ||
        header[2] != "label") {
      parse_fail(path, line_no, "expected header task,worker,label");
    }
  }

  ParsedLabels out;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, sep, path, line_no);
    if (fields.size() != 3) {
      parse_fail(path, line_no,
                 "expected 3 fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t f = 0; f < 3; ++f) {
      if (fields[f].empty()) {
        static const char* kNames[] = {"task", "worker", "label"};
        parse_fail(path, line_no, std::string("empty ") + kNames[f] + " field");
      }
    }
    RawLabelRecord record{fields[0], fields[1], fields[2]};
    const auto key = std::make_pair(record.task, record.worker);
    if (const auto it = seen.find(key); it != seen.end()) {
      out.records[it->second] = std::move(record);  // last occurrence wins
      ++out.duplicates;
    } else {
      seen.emplace(key, out.records.size());
      out.records.push_back(std::move(record));
    }
  }
  return out;
}

BinarizationConfig::BinarizationConfig(std::set<std::string> positive_in,
                                       std::set<std::string> negative_in)
    : positive(std::move(positive_in)), negative(std::move(negative_in)) {
  for (const auto& p : positive) {
    if (negative.count(p) != 0) {
      throw std::invalid_argument("label value mapped to both signs: " + p);
    }
  }
}

BinarizationConfig BinarizationConfig::plus_minus_one() {
  return BinarizationConfig({"1", "+1"}, {"-1"});
}

std::vector<BinaryLabelRecord> binarize(const std::vector<RawLabelRecord>& records,
                                        const BinarizationConfig& config) {
  std::set<std::string> unmapped;
  for (const auto& r : records) {
    if (config.positive.count(r.label) == 0 && config.negative.count(r.label) == 0) {
      unmapped.insert(r.label);
    }
  }
  if (!unmapped.empty()) {
    std::string message = "label values not covered by the binarization config:";
    for (const auto& v : unmapped) message += " \"" + v + "\"";
    throw std::runtime_error(message);
  }

  std::vector<BinaryLabelRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back({r.task, r.worker,
                   config.positive.count(r.label) != 0 ? std::int8_t{+1} : std::int8_t{-1}});
  }
  return out;
}

Dataset Dataset::from_records(const std::vector<BinaryLabelRecord>& records) {
  Dataset ds;
  {
    std::set<std::string> tasks, workers;
    for (const auto& r : records) {
      tasks.insert(r.task);
      workers.insert(r.worker);
    }
    ds.task_ids_.assign(tasks.begin(), tasks.end());
    ds.worker_ids_.assign(workers.begin(), workers.end());
  }
  std::map<std::string, std::int64_t> task_index;
  std::map<std::string, int> worker_index;
  for (std::size_t i = 0; i < ds.task_ids_.size(); ++i) {
    task_index[ds.task_ids_[i]] = static_cast<std::int64_t>(i);
  }
  for (std::size_t i = 0; i < ds.worker_ids_.size(); ++i) {
    worker_index[ds.worker_ids_[i]] = static_cast<int>(i);
  }

  ds.by_task_.resize(ds.task_ids_.size());
  ds.worker_label_counts_.assign(ds.worker_ids_.size(), 0);
  for (const auto& r : records) {
    const auto task = task_index[r.task];
    const int worker = worker_index[r.worker];
    ds.by_task_[static_cast<std::size_t>(task)].push_back({worker, r.value});
    ++ds.worker_label_counts_[static_cast<std::size_t>(worker)];
    ++ds.num_labels_;
  }
  for (auto& labels : ds.by_task_) {
    std::sort(labels.begin(), labels.end());
  }
  return ds;
}

void Dataset::attach_gold(const std::vector<std::pair<std::string, std::int8_t>>& gold_labels) {
  std::map<std::string, std::int64_t> task_index;
  for (std::size_t i = 0; i < task_ids_.size(); ++i) {
    task_index[task_ids_[i]] = static_cast<std::int64_t>(i);
  }
  std::vector<std::int8_t> gold(task_ids_.size(), 0);
  std::vector<std::string> unmatched;
  for (const auto& [task, value] : gold_labels) {
    if (const auto it = task_index.find(task); it != task_index.end()) {
      gold[static_cast<std::size_t>(it->second)] = value;
    } else {
      unmatched.push_back(task);
    }
  }
  if (!unmatched.empty()) {
    std::string message = "gold task ids not present in the label file:";
    for (const auto& t : unmatched) message += " \"" + t + "\"";
    throw std::runtime_error(message);
  }
  gold_ = std::move(gold);
}

DatasetStats Dataset::stats() const {
  DatasetStats s;
  s.num_tasks = num_tasks();
  s.num_workers = num_workers();
  s.num_labels = num_labels_;
  const double cells = static_cast<double>(s.num_tasks) * static_cast<double>(s.num_workers);
  s.density = cells > 0.0 ? static_cast<double>(s.num_labels) / cells : 0.0;
  s.worker_degree =
      s.num_workers > 0 ? static_cast<double>(s.num_labels) / s.num_workers : 0.0;
  return s;
}

Dataset filter_workers(const Dataset& dataset, std::int64_t min_labels) {
  std::vector<BinaryLabelRecord> kept;
  for (std::int64_t task = 0; task < dataset.num_tasks(); ++task) {
    for (const auto& [worker, value] : dataset.labels_for_task(task)) {
      if (dataset.labels_for_worker(worker) >= min_labels) {
        kept.push_back({dataset.task_ids()[static_cast<std::size_t>(task)],
                        dataset.worker_ids()[static_cast<std::size_t>(worker)], value});
      }
    }
  }
  Dataset filtered = Dataset::from_records(kept);

  // from_records drops ids that no longer appear; re-add label-less tasks so
  // they are still predicted (by tie-break), and carry gold across.
  std::vector<std::string> missing_tasks;
  {
    std::set<std::string> present(filtered.task_ids_.begin(), filtered.task_ids_.end());
    for (const auto& t : dataset.task_ids()) {
      if (present.count(t) == 0) missing_tasks.push_back(t);
    }
  }
  if (!missing_tasks.empty()) {
    std::vector<std::string> all_tasks = filtered.task_ids_;
    all_tasks.insert(all_tasks.end(), missing_tasks.begin(), missing_tasks.end());
    std::sort(all_tasks.begin(), all_tasks.end());
    std::map<std::string, std::size_t> new_index;
    for (std::size_t i = 0; i < all_tasks.size(); ++i) new_index[all_tasks[i]] = i;

    std::vector<std::vector<std::pair<int, std::int8_t>>> by_task(all_tasks.size());
    for (std::size_t old = 0; old < filtered.task_ids_.size(); ++old) {
      by_task[new_index[filtered.task_ids_[old]]] = std::move(filtered.by_task_[old]);
    }
    filtered.task_ids_ = std::move(all_tasks);
    filtered.by_task_ = std::move(by_task);
  }

  if (dataset.gold().has_value()) {
    std::vector<std::pair<std::string, std::int8_t>> gold_labels;
    for (std::int64_t task = 0; task < dataset.num_tasks(); ++task) {
      const std::int8_t g = (*dataset.gold())[static_cast<std::size_t>(task)];
      if (g != 0) {
        gold_labels.push_back({dataset.task_ids()[static_cast<std::size_t>(task)], g});
      }
    }
    filtered.attach_gold(gold_labels);
  }
  return filtered;
}

TaskTable to_task_samples(const Dataset& dataset) {
  TaskTable table;
  table.samples.resize(static_cast<std::size_t>(dataset.num_tasks()));
  table.has_gold.assign(static_cast<std::size_t>(dataset.num_tasks()), false);
  for (std::int64_t task = 0; task < dataset.num_tasks(); ++task) {
    auto& sample = table.samples[static_cast<std::size_t>(task)];
    sample.answers.assign(static_cast<std::size_t>(dataset.num_workers()), 0);
    for (const auto& [worker, value] : dataset.labels_for_task(task)) {
      sample.answers[static_cast<std::size_t>(worker)] = value;
    }
    sample.ground_truth = 0;
    if (dataset.gold().has_value()) {
      const std::int8_t g = (*dataset.gold())[static_cast<std::size_t>(task)];
      if (g != 0) {
        sample.ground_truth = g;
        table.has_gold[static_cast<std::size_t>(task)] = true;
      }
    }
  }
  return table;
}

std::vector<std::pair<std::string, std::int8_t>> parse_gold(const std::filesystem::path& path,
                                                            LabelFileFormat format,
                                                            const BinarizationConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gold file: " + path.string());
  const char sep = separator_for(format);

  std::string line;
  std::int64_t line_no = 0;
  if (!std::getline(in, line)) parse_fail(path, 1, "missing header row");
  ++line_no;
  {
    const auto header = split_fields(line, sep, path, line_no);
    if (header.size() != 2 || header[0] != "task" || header[1] != "label") {
      parse_fail(path, line_no, "expected header task,label");
    }
  }

  std::vector<std::pair<std::string, std::int8_t>> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, sep, path, line_no);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      parse_fail(path, line_no, "expected task,label");
    }
    std::int8_t value;
    if (config.positive.count(fields[1]) != 0) {
      value = +1;
    } else if (config.negative.count(fields[1]) != 0) {
      value = -1;
    } else {
      parse_fail(path, line_no, "gold label \"" + fields[1] + "\" not covered by the config");
    }
    out.push_back({fields[0], value});
  }
  return out;
}

namespace {

std::string padded_id(char prefix, std::int64_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*lld", prefix, width, static_cast<long long>(value));
  return buf;
}

}  // namespace

void write_labels_csv(std::ostream& out, const std::vector<TaskSample>& samples) {
  out << "task,worker,label\n";
  for (std::size_t task = 0; task < samples.size(); ++task) {
    const auto& answers = samples[task].answers;
    for (std::size_t worker = 0; worker < answers.size(); ++worker) {
      if (answers[worker] == 0) continue;
      out << padded_id('t', static_cast<std::int64_t>(task), 7) << ','
          << padded_id('w', static_cast<std::int64_t>(worker), 5) << ','
          << static_cast<int>(answers[worker]) << '\n';
    }
  }
}

void write_gold_csv(std::ostream& out, const std::vector<TaskSample>& samples) {
  out << "task,label\n";
  for (std::size_t task = 0; task < samples.size(); ++task) {
    out << padded_id('t', static_cast<std::int64_t>(task), 7) << ','
        << static_cast<int>(samples[task].ground_truth) << '\n';
  }
}

}  // namespace crowdte
