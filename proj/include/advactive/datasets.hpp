#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "advactive/idx.hpp"
#include "advactive/types.hpp"

namespace advactive {

enum class Task : std::uint8_t { synthetic2d, mnist56 };

std::string_view to_string(Task task);
Task task_from_string(std::string_view name);

struct DatasetSpec {
    Task task = Task::synthetic2d;
    std::size_t pool_per_class = 105;
    std::size_t labeled_per_class = 5;
    std::size_t validation_per_class = 5;
    std::size_t test_positive = 200;
    std::size_t test_negative = 200;
    std::uint64_t seed = 1;

    static DatasetSpec synthetic_default();
    /// 105 of each digit in the pool; 456 fives and 462 sixes for testing.
    static DatasetSpec mnist_default();

    /// Throws ConfigError when the counts cannot produce a trainable split.
    void validate() const;

    bool operator==(const DatasetSpec&) const = default;
};

/// Labels the experiment may not show to the learner. Only the oracle checks
/// and the test suite read these.
class GroundTruth {
public:
    void set(SampleId id, Label y) { labels_[id] = y; }
    std::optional<Label> find(SampleId id) const;
    std::size_t size() const { return labels_.size(); }

private:
    std::unordered_map<SampleId, Label> labels_;
};

/// The training pool T_r and the test set, built once per experiment.
/// Every pool sample carries the label it would receive if drawn into T_l or V;
/// `pool_class` records the class it was drawn from, used to stratify the split.
struct TaskData {
    Task task = Task::synthetic2d;
    std::vector<Sample> pool;
    std::vector<Label> pool_class;
    std::vector<Sample> test;
    std::size_t dimension = 0;
};

struct PoolSplit {
    DataPools pools;
    GroundTruth hidden;  // labels stripped from T_u
};

/// Class +1 ~ N((2,0), I), class -1 ~ N((-2,0), I). Pool labels follow the Bayes rule
/// (sign of the first coordinate); test labels are the generating class.
TaskData make_synthetic_task(const DatasetSpec& spec);

/// Digit 5 -> +1, digit 6 -> -1. Pool and test draws are disjoint and uniform
/// under spec.seed; pixels are already scaled to [0,1] by the IDX reader.
TaskData make_mnist_task(const idx::Images& images, const idx::Labels& labels, const DatasetSpec& spec);

/// Draws T_l and V per class uniformly from the pool; the rest becomes T_u with labels hidden.
PoolSplit split_pools(const TaskData& task, const DatasetSpec& spec, std::uint64_t split_seed);

PoolSplit generate_synthetic(const DatasetSpec& spec);
PoolSplit build_mnist_task(const idx::Images& images, const idx::Labels& labels, const DatasetSpec& spec);

}  // namespace advactive
